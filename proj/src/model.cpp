#include "volterra/model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace volterra {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_square(const Matrix& m, Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument(std::string(what) + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
  if (!all_finite(m)) throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

void require_vector(const Vector& v, Index dim, const char* what) {
  if (v.size() != dim) throw std::invalid_argument(std::string(what) + " must have length " + std::to_string(dim));
  if (!all_finite(v)) throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

cplx int_pow(cplx r, std::size_t n) {
  cplx result{1.0, 0.0};
  while (n > 0) {
    if (n & 1U) result *= r;
    r *= r;
    n >>= 1U;
  }
  return result;
}

bool same(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

Kernel::Kernel(Variant v) : v_(std::move(v)) {
  std::visit(overloaded{
                 [](const FiniteKernel& k) {
                   if (k.dim < 1) throw std::invalid_argument("kernel dimension must be positive");
                   for (const auto& t : k.terms) require_square(t, k.dim, "finite kernel term");
                 },
                 [](const GeometricSumKernel& k) {
                   if (k.dim < 1) throw std::invalid_argument("kernel dimension must be positive");
                   for (const auto& t : k.terms) {
                     require_square(t.coefficient, k.dim, "geometric kernel coefficient");
                     if (!(std::abs(t.ratio) < 1.0))
                       throw std::invalid_argument("geometric kernel ratio must lie strictly inside the unit disk");
                   }
                 },
                 [](const TabulatedKernel& k) {
                   if (k.dim < 1) throw std::invalid_argument("kernel dimension must be positive");
                   for (const auto& t : k.values) require_square(t, k.dim, "tabulated kernel value");
                   if (!(k.tail_norm_bound >= 0.0) || !std::isfinite(k.tail_norm_bound))
                     throw std::invalid_argument("tabulated kernel tail bound must be finite and non-negative");
                 },
             },
             v_);
}

Index Kernel::dim() const {
  return std::visit([](const auto& k) { return k.dim; }, v_);
}

Matrix kernel_eval(const Kernel& kernel, std::size_t n, EvalMode mode) {
  const Index d = kernel.dim();
  return std::visit(
      overloaded{
          [&](const FiniteKernel& k) -> Matrix {
            return n < k.terms.size() ? k.terms[n] : Matrix::Zero(d, d);
          },
          [&](const GeometricSumKernel& k) -> Matrix {
            Matrix out = Matrix::Zero(d, d);
            for (const auto& t : k.terms) out += t.coefficient * int_pow(t.ratio, n);
            return out;
          },
          [&](const TabulatedKernel& k) -> Matrix {
            if (n < k.values.size()) return k.values[n];
            if (mode == EvalMode::strict && k.tail_norm_bound > 0.0)
              throw TailAccessError("tabulated kernel evaluated at n=" + std::to_string(n) +
                                    " past its table with a nonzero tail bound");
            return Matrix::Zero(d, d);
          },
      },
      kernel.variant());
}

std::vector<Matrix> kernel_table(const Kernel& kernel, std::size_t count) {
  const Index d = kernel.dim();
  std::vector<Matrix> table(count, Matrix::Zero(d, d));
  if (const auto* g = std::get_if<GeometricSumKernel>(&kernel.variant())) {
    for (const auto& t : g->terms) {
      cplx p{1.0, 0.0};
      for (std::size_t n = 0; n < count; ++n) {
        table[n] += t.coefficient * p;
        p *= t.ratio;
      }
    }
    return table;
  }
  for (std::size_t n = 0; n < count; ++n) table[n] = kernel_eval(kernel, n);
  return table;
}

double kernel_norm_sum(const Kernel& kernel) {
  return std::visit(overloaded{
                        [](const FiniteKernel& k) {
                          double s = 0.0;
                          for (const auto& t : k.terms) s += operator_norm(t);
                          return s;
                        },
                        [](const GeometricSumKernel& k) {
                          double s = 0.0;
                          for (const auto& t : k.terms) s += operator_norm(t.coefficient) / (1.0 - std::abs(t.ratio));
                          return s;
                        },
                        [](const TabulatedKernel& k) {
                          double s = k.tail_norm_bound;
                          for (const auto& t : k.values) s += operator_norm(t);
                          return s;
                        },
                    },
                    kernel.variant());
}

Kernel tabulate(const Kernel& kernel, std::size_t count) {
  const Index d = kernel.dim();
  auto values = kernel_table(kernel, count);
  const double tail = std::visit(
      overloaded{
          [&](const FiniteKernel& k) {
            double s = 0.0;
            for (std::size_t n = count; n < k.terms.size(); ++n) s += operator_norm(k.terms[n]);
            return s;
          },
          [&](const GeometricSumKernel& k) {
            double s = 0.0;
            for (const auto& t : k.terms) {
              const double r = std::abs(t.ratio);
              s += operator_norm(t.coefficient) * std::pow(r, static_cast<double>(count)) / (1.0 - r);
            }
            return s;
          },
          [&](const TabulatedKernel& k) {
            double s = k.tail_norm_bound;
            for (std::size_t n = count; n < k.values.size(); ++n) s += operator_norm(k.values[n]);
            return s;
          },
      },
      kernel.variant());
  return Kernel(TabulatedKernel{d, std::move(values), tail});
}

VolterraSystem::VolterraSystem(Matrix a, Kernel kernel) : a_(std::move(a)), kernel_(std::move(kernel)) {
  if (a_.rows() < 1) throw std::invalid_argument("state dimension must be positive");
  require_square(a_, a_.rows(), "A");
  if (kernel_.dim() != a_.rows())
    throw std::invalid_argument("kernel dimension " + std::to_string(kernel_.dim()) +
                                " does not match A dimension " + std::to_string(a_.rows()));
}

ContractionCheck contraction_check(const VolterraSystem& system) {
  ContractionCheck c;
  c.a_norm = operator_norm(system.a());
  c.kernel_norm_sum = kernel_norm_sum(system.kernel());
  const double total = c.a_norm + c.kernel_norm_sum;
  c.slack = 1.0 - total;
  // SVD of an exact contraction can land one ulp above 1.
  c.holds = total <= 1.0 + 8.0 * std::numeric_limits<double>::epsilon();
  return c;
}

Forcing::Forcing(Variant v) : v_(std::move(v)) {
  std::visit(overloaded{
                 [](const ZeroForcing& f) {
                   if (f.dim < 1) throw std::invalid_argument("forcing dimension must be positive");
                 },
                 [](const ConstantForcing& f) {
                   if (f.value.size() < 1) throw std::invalid_argument("forcing dimension must be positive");
                   require_vector(f.value, f.value.size(), "constant forcing");
                 },
                 [](const HarmonicForcing& f) {
                   if (f.dim < 1) throw std::invalid_argument("forcing dimension must be positive");
                   for (const auto& m : f.modes) {
                     if (!(m.angle >= 0.0 && m.angle < kTwoPi))
                       throw std::invalid_argument("harmonic angle must lie in [0, 2pi)");
                     require_vector(m.amplitude, f.dim, "harmonic amplitude");
                   }
                 },
                 [](const DecayingForcing& f) {
                   if (f.amplitude.size() < 1) throw std::invalid_argument("forcing dimension must be positive");
                   require_vector(f.amplitude, f.amplitude.size(), "decaying amplitude");
                   if (f.profile == DecayingForcing::Profile::geometric && !(std::abs(f.ratio) < 1.0))
                     throw std::invalid_argument("decaying forcing ratio must lie strictly inside the unit disk");
                 },
                 [](const TabulatedForcing& f) {
                   if (f.dim < 1) throw std::invalid_argument("forcing dimension must be positive");
                   for (const auto& v : f.values) require_vector(v, f.dim, "tabulated forcing value");
                 },
             },
             v_);
}

Index Forcing::dim() const {
  return std::visit(overloaded{
                        [](const ZeroForcing& f) { return f.dim; },
                        [](const ConstantForcing& f) { return f.value.size(); },
                        [](const HarmonicForcing& f) { return f.dim; },
                        [](const DecayingForcing& f) { return f.amplitude.size(); },
                        [](const TabulatedForcing& f) { return f.dim; },
                    },
                    v_);
}

double Forcing::amplitude_bound() const {
  return std::visit(overloaded{
                        [](const ZeroForcing&) { return 0.0; },
                        [](const ConstantForcing& f) { return f.value.norm(); },
                        [](const HarmonicForcing& f) {
                          double s = 0.0;
                          for (const auto& m : f.modes) s += m.amplitude.norm();
                          return s;
                        },
                        [](const DecayingForcing& f) { return f.amplitude.norm(); },
                        [](const TabulatedForcing& f) {
                          double s = 0.0;
                          for (const auto& v : f.values) s = std::max(s, v.norm());
                          return s;
                        },
                    },
                    v_);
}

std::vector<double> Forcing::frequencies() const {
  if (const auto* h = std::get_if<HarmonicForcing>(&v_)) {
    std::vector<double> out;
    for (const auto& m : h->modes) out.push_back(m.angle);
    return out;
  }
  if (std::holds_alternative<ConstantForcing>(v_)) return {0.0};
  return {};
}

Vector forcing_eval(const Forcing& forcing, std::size_t n) {
  const Index d = forcing.dim();
  return std::visit(overloaded{
                        [&](const ZeroForcing&) -> Vector { return Vector::Zero(d); },
                        [&](const ConstantForcing& f) -> Vector { return f.value; },
                        [&](const HarmonicForcing& f) -> Vector {
                          Vector y = Vector::Zero(d);
                          // Reduce n*θ before taking sin/cos; n*θ itself loses digits for large n.
                          for (const auto& m : f.modes)
                            y += unit(std::fmod(static_cast<double>(n) * m.angle, kTwoPi)) * m.amplitude;
                          return y;
                        },
                        [&](const DecayingForcing& f) -> Vector {
                          if (f.profile == DecayingForcing::Profile::inverse)
                            return f.amplitude / static_cast<double>(n + 1);
                          return f.amplitude * int_pow(f.ratio, n);
                        },
                        [&](const TabulatedForcing& f) -> Vector {
                          return n < f.values.size() ? f.values[n] : Vector::Zero(d);
                        },
                    },
                    forcing.variant());
}

bool operator==(const Kernel& a, const Kernel& b) {
  if (a.variant().index() != b.variant().index() || a.dim() != b.dim()) return false;
  return std::visit(
      overloaded{
          [&](const FiniteKernel& k) {
            const auto& o = std::get<FiniteKernel>(b.variant());
            if (k.terms.size() != o.terms.size()) return false;
            for (std::size_t i = 0; i < k.terms.size(); ++i)
              if (!same(k.terms[i], o.terms[i])) return false;
            return true;
          },
          [&](const GeometricSumKernel& k) {
            const auto& o = std::get<GeometricSumKernel>(b.variant());
            if (k.terms.size() != o.terms.size()) return false;
            for (std::size_t i = 0; i < k.terms.size(); ++i)
              if (!same(k.terms[i].coefficient, o.terms[i].coefficient) || k.terms[i].ratio != o.terms[i].ratio)
                return false;
            return true;
          },
          [&](const TabulatedKernel& k) {
            const auto& o = std::get<TabulatedKernel>(b.variant());
            if (k.values.size() != o.values.size() || k.tail_norm_bound != o.tail_norm_bound) return false;
            for (std::size_t i = 0; i < k.values.size(); ++i)
              if (!same(k.values[i], o.values[i])) return false;
            return true;
          },
      },
      a.variant());
}

bool operator==(const Forcing& a, const Forcing& b) {
  if (a.variant().index() != b.variant().index() || a.dim() != b.dim()) return false;
  return std::visit(
      overloaded{
          [&](const ZeroForcing&) { return true; },
          [&](const ConstantForcing& f) { return same(f.value, std::get<ConstantForcing>(b.variant()).value); },
          [&](const HarmonicForcing& f) {
            const auto& o = std::get<HarmonicForcing>(b.variant());
            if (f.modes.size() != o.modes.size()) return false;
            for (std::size_t i = 0; i < f.modes.size(); ++i)
              if (f.modes[i].angle != o.modes[i].angle || !same(f.modes[i].amplitude, o.modes[i].amplitude))
                return false;
            return true;
          },
          [&](const DecayingForcing& f) {
            const auto& o = std::get<DecayingForcing>(b.variant());
            return f.profile == o.profile && f.ratio == o.ratio && same(f.amplitude, o.amplitude);
          },
          [&](const TabulatedForcing& f) {
            const auto& o = std::get<TabulatedForcing>(b.variant());
            if (f.values.size() != o.values.size()) return false;
            for (std::size_t i = 0; i < f.values.size(); ++i)
              if (!same(f.values[i], o.values[i])) return false;
            return true;
          },
      },
      a.variant());
}

bool operator==(const VolterraSystem& a, const VolterraSystem& b) {
  return same(a.a(), b.a()) && a.kernel() == b.kernel();
}

}  // namespace volterra
