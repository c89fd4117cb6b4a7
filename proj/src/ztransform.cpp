#include "volterra/ztransform.hpp"

#include "volterra/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace volterra {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_outside_disk(cplx z) {
  if (!(std::abs(z) > 1.0))
    throw DomainError("the Z-transform of tabulated data needs |z| > 1, got |z| = " + std::to_string(std::abs(z)));
}

/// sum_j values[j] w^j by Horner's rule.
template <class Get>
Matrix horner(std::size_t count, Index rows, Index cols, cplx w, Get&& get) {
  Matrix acc = Matrix::Zero(rows, cols);
  for (std::size_t j = count; j-- > 0;) acc = acc * w + get(j);
  return acc;
}

/// sum_j ‖x(j)‖ |z|^{-j}
double weighted_mass(const Sequence& x, double radius) {
  double mass = 0.0;
  double p = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    mass += x.norm_at(j) * p;
    p /= radius;
  }
  return mass;
}

/// tail[m] = sum_{k>=m} ‖B(k)‖ |z|^{-k} for m = 0..count.
std::vector<double> kernel_weighted_tails(const Kernel& kernel, double radius, std::size_t count) {
  std::vector<double> tail(count + 1, 0.0);
  if (const auto* g = std::get_if<GeometricSumKernel>(&kernel.variant())) {
    for (const auto& t : g->terms) {
      const double rho = std::abs(t.ratio) / radius;
      const double c = operator_norm(t.coefficient) / (1.0 - rho);
      double p = 1.0;
      for (std::size_t m = 0; m <= count; ++m) {
        tail[m] += c * p;
        p *= rho;
      }
    }
    return tail;
  }
  std::size_t stored = 0;
  double beyond = 0.0;
  if (const auto* f = std::get_if<FiniteKernel>(&kernel.variant())) {
    stored = f->terms.size();
  } else {
    const auto& t = std::get<TabulatedKernel>(kernel.variant());
    stored = t.values.size();
    beyond = t.tail_norm_bound * std::pow(radius, -static_cast<double>(stored));
  }
  const auto table = kernel_table(kernel, stored);
  std::vector<double> weighted(stored);
  double p = 1.0;
  for (std::size_t k = 0; k < stored; ++k) {
    weighted[k] = operator_norm(table[k]) * p;
    p /= radius;
  }
  double suffix = beyond;
  std::vector<double> full(std::max(stored, count) + 1, beyond);
  for (std::size_t k = stored; k-- > 0;) {
    suffix += weighted[k];
    full[k] = suffix;
  }
  for (std::size_t m = 0; m <= count; ++m) tail[m] = full[m];
  return tail;
}

}  // namespace

ZValue zt_sequence(const Sequence& x, cplx z, std::optional<double> tail_sup) {
  require_outside_disk(z);
  const cplx w = 1.0 / z;
  ZValue out;
  out.value = horner(x.size(), x.rows(), x.cols(), w, [&](std::size_t j) { return Matrix(x[j]); });
  const double sup = tail_sup.value_or(x.sup_norm());
  const double r = std::abs(z);
  out.truncation_bound = sup * std::pow(r, -static_cast<double>(x.size())) / (1.0 - 1.0 / r);
  return out;
}

ZValue zt_kernel(const Kernel& kernel, cplx z) {
  const Index d = kernel.dim();
  ZValue out;
  if (const auto* f = std::get_if<FiniteKernel>(&kernel.variant())) {
    if (f->terms.empty()) {
      out.value = Matrix::Zero(d, d);
      return out;
    }
    if (z == cplx(0.0, 0.0)) throw DomainError("the transform of a finite kernel is undefined at z = 0");
    out.value = horner(f->terms.size(), d, d, 1.0 / z, [&](std::size_t j) { return f->terms[j]; });
    return out;
  }
  if (const auto* g = std::get_if<GeometricSumKernel>(&kernel.variant())) {
    out.value = Matrix::Zero(d, d);
    for (const auto& t : g->terms) {
      const cplx gap = z - t.ratio;
      if (std::abs(gap) <= 16.0 * kEps * (1.0 + std::abs(z)))
        throw PoleError("z coincides with the kernel pole r = (" + std::to_string(t.ratio.real()) + ", " +
                        std::to_string(t.ratio.imag()) + ")");
      out.value += t.coefficient * (z / gap);
    }
    return out;
  }
  const auto& t = std::get<TabulatedKernel>(kernel.variant());
  const double r = std::abs(z);
  if (r < 1.0 - 4.0 * kEps)
    throw DomainError("a tabulated kernel cannot be transformed inside the unit disk, got |z| = " + std::to_string(r));
  out.value = horner(t.values.size(), d, d, 1.0 / z, [&](std::size_t j) { return t.values[j]; });
  out.truncation_bound = t.tail_norm_bound * std::pow(std::max(r, 1.0), -static_cast<double>(t.values.size()));
  return out;
}

RuleCheck shift_rule_check(const Sequence& x, cplx z, std::optional<double> tail_sup) {
  require_outside_disk(z);
  RuleCheck out;
  if (x.size() < 2) {
    out.holds = true;
    return out;
  }
  const double r = std::abs(z);
  const double sup = tail_sup.value_or(x.sup_norm());
  const ZValue shifted = zt_sequence(x.shifted(1), z, sup);
  const ZValue full = zt_sequence(x, z, sup);
  const Matrix rhs = z * full.value - z * Matrix(x[0]);
  out.residual = operator_norm(shifted.value - rhs);
  const double roundoff = 8.0 * static_cast<double>(x.size()) * kEps * (1.0 + r) * weighted_mass(x, r);
  out.bound = shifted.truncation_bound + r * full.truncation_bound + roundoff;
  out.holds = out.residual <= out.bound;
  return out;
}

RuleCheck convolution_rule_check(const Kernel& kernel, const Sequence& x, cplx z) {
  require_outside_disk(z);
  if (kernel.dim() != x.rows()) throw std::invalid_argument("kernel dimension does not match sequence elements");
  RuleCheck out;
  const double r = std::abs(z);
  const std::size_t n = x.size();
  const Sequence y = convolve(kernel, x);
  const ZValue lhs = zt_sequence(y, z, 0.0);
  const ZValue xt = zt_sequence(x, z, 0.0);
  const ZValue bt = zt_kernel(kernel, z);
  out.residual = operator_norm(lhs.value - bt.value * xt.value);

  // Products B(k) x(j) with j < n <= j + k are in B~ x~ but not in the window of B * x.
  const auto tails = kernel_weighted_tails(kernel, r, n);
  double truncation = 0.0;
  double p = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    truncation += x.norm_at(j) * p * tails[n - j];
    p /= r;
  }
  const double mass_x = weighted_mass(x, r);
  const double roundoff = 16.0 * static_cast<double>(n + 1) * kEps *
                          (weighted_mass(y, r) + (operator_norm(bt.value) + tails[0]) * mass_x);
  out.bound = truncation + bt.truncation_bound * operator_norm(xt.value) + roundoff;
  out.holds = out.residual <= out.bound;
  return out;
}

InitialValueCheck initial_value_check(const Sequence& x, std::vector<double> radii, double direction) {
  InitialValueCheck out;
  out.radii = std::move(radii);
  if (x.empty() || out.radii.empty()) {
    out.gaps_monotone = out.holds = true;
    return out;
  }
  const double sup = x.sup_norm();
  const double roundoff = 8.0 * static_cast<double>(x.size()) * kEps * sup;
  out.gaps_monotone = true;
  out.holds = true;
  double truncation = 0.0;
  for (std::size_t i = 0; i < out.radii.size(); ++i) {
    const double s = out.radii[i];
    if (!(s > 1.0)) throw DomainError("initial value radii must exceed 1");
    const ZValue v = zt_sequence(x, std::polar(s, direction));
    truncation = v.truncation_bound;
    const double gap = operator_norm(v.value - Matrix(x[0]));
    out.gaps.push_back(gap);
    out.envelopes.push_back(weighted_mass(x, s) - x.norm_at(0));
    if (gap > out.envelopes.back() + truncation + roundoff) out.holds = false;
    if (i > 0 && gap > out.gaps[i - 1] * (1.0 + 64.0 * kEps) + roundoff) out.gaps_monotone = false;
  }
  out.final_bound = sup / (out.radii.back() - 1.0);
  out.holds = out.holds && out.gaps.back() <= out.final_bound + truncation + roundoff;
  return out;
}

double cauchy_riemann_defect(const Kernel& kernel, cplx z, double h) {
  const cplx i(0.0, 1.0);
  const Matrix dx = (zt_kernel(kernel, z + h).value - zt_kernel(kernel, z - h).value) / (2.0 * h);
  const Matrix dy = (zt_kernel(kernel, z + i * h).value - zt_kernel(kernel, z - i * h).value) / (2.0 * h);
  return operator_norm(0.5 * (dx + i * dy));
}

}  // namespace volterra
