#pragma once

// Recursion kernel shared by the reference solver, the base case of the fast
// solver and the extended-precision difference path. Templated on the complex
// scalar so the same loop runs in double and in multiprecision.

#include "volterra/model.hpp"
#include "volterra/solver.hpp"

#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

namespace volterra::detail {

/// States are d x p blocks in column-major order, one block per index n.
template <class C>
struct FlatSystem {
  Index d = 0;
  std::vector<C> a;       // d*d
  std::vector<C> kernel;  // lag-major, d*d per lag

  std::size_t lags() const { return kernel.size() / static_cast<std::size_t>(d * d); }
};

template <class C>
C to_scalar(const cplx& z) {
  return C(z.real(), z.imag());
}

template <class C>
void append_matrix(std::vector<C>& out, const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out.push_back(to_scalar<C>(m(i, j)));
}

/// Kernel values for lags [first, first + count) in scalar type C. Geometric
/// kernels are evaluated with powers formed in C so extended precision is not
/// limited by double-rounded kernel values.
template <class C>
std::vector<C> flat_kernel(const Kernel& kernel, std::size_t first, std::size_t count) {
  const Index d = kernel.dim();
  const auto dd = static_cast<std::size_t>(d * d);
  std::vector<C> out;
  out.reserve(count * dd);
  if (const auto* g = std::get_if<GeometricSumKernel>(&kernel.variant())) {
    out.assign(count * dd, C(0.0, 0.0));
    for (const auto& t : g->terms) {
      const C r = to_scalar<C>(t.ratio);
      C p(1.0, 0.0);
      for (std::size_t n = 0; n < first; ++n) p *= r;
      for (std::size_t n = 0; n < count; ++n) {
        for (Index j = 0; j < d; ++j)
          for (Index i = 0; i < d; ++i)
            out[n * dd + static_cast<std::size_t>(i + j * d)] += to_scalar<C>(t.coefficient(i, j)) * p;
        p *= r;
      }
    }
    return out;
  }
  for (std::size_t n = 0; n < count; ++n) append_matrix(out, kernel_eval(kernel, first + n));
  return out;
}

template <class C>
FlatSystem<C> flatten(const VolterraSystem& system, std::size_t lags) {
  FlatSystem<C> f;
  f.d = system.dim();
  append_matrix(f.a, system.a());
  f.kernel = flat_kernel<C>(system.kernel(), 0, lags);
  return f;
}

template <class C>
bool finite_value(const C& v) {
  using std::isfinite;
  return isfinite(v.real()) && isfinite(v.imag());
}

/// Computes x(n+1) for n in [lo, hi):
///   x(n+1) = A x(n) + acc(n) + sum_{k=lo}^{n} B(n-k) x(k) + y(n)
/// where acc(n) carries the contribution of x(k), k < lo (null when lo == 0)
/// and y is optional. Requires sys.lags() >= hi - lo.
template <class C>
void advance_block(const FlatSystem<C>& sys, Index p, const C* forcing, const C* acc, C* states, std::size_t lo,
                   std::size_t hi) {
  const Index d = sys.d;
  const auto bs = static_cast<std::size_t>(d * p);
  const auto dd = static_cast<std::size_t>(d * d);
  std::vector<C> next(bs);
  for (std::size_t n = lo; n < hi; ++n) {
    const C* xn = states + n * bs;
    for (Index c = 0; c < p; ++c)
      for (Index i = 0; i < d; ++i) {
        C s(0.0, 0.0);
        for (Index j = 0; j < d; ++j) s += sys.a[static_cast<std::size_t>(i + j * d)] * xn[j + c * d];
        next[static_cast<std::size_t>(i + c * d)] = s;
      }
    if (acc != nullptr)
      for (std::size_t e = 0; e < bs; ++e) next[e] += acc[n * bs + e];
    for (std::size_t k = lo; k <= n; ++k) {
      const C* b = sys.kernel.data() + (n - k) * dd;
      const C* xk = states + k * bs;
      for (Index c = 0; c < p; ++c)
        for (Index i = 0; i < d; ++i) {
          C s(0.0, 0.0);
          for (Index j = 0; j < d; ++j) s += b[i + j * d] * xk[j + c * d];
          next[static_cast<std::size_t>(i + c * d)] += s;
        }
    }
    if (forcing != nullptr)
      for (std::size_t e = 0; e < bs; ++e) next[e] += forcing[n * bs + e];
    C* out = states + (n + 1) * bs;
    for (std::size_t e = 0; e < bs; ++e) {
      if (!finite_value(next[e])) throw OverflowError(n + 1);
      out[e] = next[e];
    }
  }
}

/// D(n) = X(n+1) - X(n), n < count, flattened d x d blocks.
template <class C>
std::vector<C> difference_recursion(const VolterraSystem& system, std::size_t count) {
  const Index d = system.dim();
  const auto dd = static_cast<std::size_t>(d * d);
  const std::size_t steps = count > 0 ? count - 1 : 0;
  auto sys = flatten<C>(system, steps);
  // Forcing B(n+1) X(0) with X(0) = I.
  const std::vector<C> forcing = flat_kernel<C>(system.kernel(), 1, steps);
  std::vector<C> states(count * dd, C(0.0, 0.0));
  if (count == 0) return states;
  const std::vector<C> b0 = flat_kernel<C>(system.kernel(), 0, 1);
  for (std::size_t e = 0; e < dd; ++e) states[e] = sys.a[e] + b0[e];
  for (Index i = 0; i < d; ++i) states[static_cast<std::size_t>(i + i * d)] -= C(1.0, 0.0);
  advance_block<C>(sys, d, forcing.data(), nullptr, states.data(), 0, steps);
  return states;
}

/// Fast path over the double instantiation; defined in solver_fast.cpp.
void march_fast(const FlatSystem<cplx>& sys, Index p, const cplx* forcing, cplx* states, std::size_t steps);

}  // namespace volterra::detail
