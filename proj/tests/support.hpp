#pragma once

#include "volterra/model.hpp"
#include "volterra/sequence.hpp"

#include <random>

namespace test {

using namespace volterra;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline cplx normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

inline Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Vector random_vector(Rng& rng, Index d) { return random_matrix(rng, d, 1); }

inline Sequence random_sequence(Rng& rng, Index d, std::size_t len) {
  return Sequence::generate(d, 1, len, [&](std::size_t) { return random_vector(rng, d); });
}

/// ‖A‖ + sum ‖B‖ = total, kernel kind 0 finite, 1 geometric, 2 tabulated.
inline VolterraSystem random_system(Rng& rng, Index d, int kind, double total) {
  const Matrix a = random_matrix(rng, d, d);
  std::vector<Matrix> table;
  std::vector<GeometricTerm> terms;
  double norm = 0.0;
  if (kind == 1) {
    for (int k = 0; k < 2; ++k) {
      const cplx r = std::polar(uniform(rng, 0.0, 0.9), uniform(rng, 0.0, 6.28));
      terms.push_back({random_matrix(rng, d, d), r});
      norm += operator_norm(terms.back().coefficient) / (1.0 - std::abs(r));
    }
  } else {
    const int len = kind == 0 ? 5 : 40;
    for (int k = 0; k < len; ++k) {
      table.push_back(std::pow(0.85, k) * random_matrix(rng, d, d));
      norm += operator_norm(table.back());
    }
  }
  const double scale = total / (operator_norm(a) + norm);
  if (kind == 1) {
    for (auto& t : terms) t.coefficient *= scale;
    return VolterraSystem(scale * a, Kernel(GeometricSumKernel{d, terms}));
  }
  for (auto& t : table) t *= scale;
  if (kind == 0) return VolterraSystem(scale * a, Kernel(FiniteKernel{d, table}));
  return VolterraSystem(scale * a, Kernel(TabulatedKernel{d, table, 0.0}));
}

inline double max_difference(const Sequence& a, const Sequence& b) {
  double worst = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) worst = std::max(worst, operator_norm(a[n] - b[n]));
  return worst;
}

}  // namespace test
