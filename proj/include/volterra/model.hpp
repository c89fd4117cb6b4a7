#pragma once

// Domain types for Volterra difference equations of convolution type
//
//   x(n+1) = A x(n) + sum_{k=0}^{n} B(n-k) x(k) + y(n),   x(n) in C^d,
//
// together with the norm bookkeeping used by the contraction test
// ‖A‖ + sum_n ‖B(n)‖ <= 1. All types are immutable values.

#include "volterra/linalg.hpp"

#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

namespace volterra {

/// B(n) = terms[n] for n < terms.size(), zero afterwards.
struct FiniteKernel {
  Index dim = 1;
  std::vector<Matrix> terms;
};

struct GeometricTerm {
  Matrix coefficient;
  cplx ratio;
};

/// B(n) = sum_j C_j r_j^n with |r_j| < 1.
struct GeometricSumKernel {
  Index dim = 1;
  std::vector<GeometricTerm> terms;
};

/// B(n) = values[n] for n < values.size(); the unknown tail is only known
/// through sum_{n >= values.size()} ‖B(n)‖ <= tail_norm_bound.
struct TabulatedKernel {
  Index dim = 1;
  std::vector<Matrix> values;
  double tail_norm_bound = 0.0;
};

enum class EvalMode { permissive, strict };

class Kernel {
 public:
  using Variant = std::variant<FiniteKernel, GeometricSumKernel, TabulatedKernel>;

  /// Validates dimensions, finiteness, |r_j| < 1 and a non-negative tail bound.
  explicit Kernel(Variant v);

  static Kernel zero(Index dim) { return Kernel(FiniteKernel{dim, {}}); }

  Index dim() const;
  const Variant& variant() const { return v_; }
  /// Finite and geometric-sum kernels have closed-form Z-transforms.
  bool is_closed_form() const { return !std::holds_alternative<TabulatedKernel>(v_); }

 private:
  Variant v_;
};

/// Raised in strict mode when a tabulated kernel is read past its table while
/// the declared tail is nonzero.
class TailAccessError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

Matrix kernel_eval(const Kernel& kernel, std::size_t n, EvalMode mode = EvalMode::permissive);

/// B(0..count-1), evaluated once.
std::vector<Matrix> kernel_table(const Kernel& kernel, std::size_t count);

/// Upper bound on sum_k ‖B(k)‖ (spectral norms).
double kernel_norm_sum(const Kernel& kernel);

/// Tabulates any kernel to `count` values with an honest tail bound.
Kernel tabulate(const Kernel& kernel, std::size_t count);

class VolterraSystem {
 public:
  VolterraSystem(Matrix a, Kernel kernel);

  Index dim() const { return a_.rows(); }
  const Matrix& a() const { return a_; }
  const Kernel& kernel() const { return kernel_; }

 private:
  Matrix a_;
  Kernel kernel_;
};

struct ContractionCheck {
  bool holds = false;
  double slack = 0.0;  // 1 - (‖A‖ + sum ‖B(n)‖)
  double a_norm = 0.0;
  double kernel_norm_sum = 0.0;
};

ContractionCheck contraction_check(const VolterraSystem& system);

struct ZeroForcing {
  Index dim = 1;
};

struct ConstantForcing {
  Vector value;
};

struct HarmonicMode {
  double angle = 0.0;  // in [0, 2π)
  Vector amplitude;
};

/// y(n) = sum_j e^{i n θ_j} v_j.
struct HarmonicForcing {
  Index dim = 1;
  std::vector<HarmonicMode> modes;
};

/// A c0 forcing: v ρ^n (|ρ| < 1) or v / (n + 1).
struct DecayingForcing {
  enum class Profile { geometric, inverse };
  Vector amplitude;
  Profile profile = Profile::geometric;
  cplx ratio{0.5, 0.0};
};

/// Stored values, zero-extended.
struct TabulatedForcing {
  Index dim = 1;
  std::vector<Vector> values;
};

class Forcing {
 public:
  using Variant = std::variant<ZeroForcing, ConstantForcing, HarmonicForcing, DecayingForcing, TabulatedForcing>;

  explicit Forcing(Variant v);
  static Forcing zero(Index dim) { return Forcing(ZeroForcing{dim}); }

  Index dim() const;
  const Variant& variant() const { return v_; }
  bool is_zero() const { return std::holds_alternative<ZeroForcing>(v_); }

  /// Bound on sup_n ‖y(n)‖ implied by the construction.
  double amplitude_bound() const;
  /// Angles carried by the forcing: harmonic modes, 0 for a constant.
  std::vector<double> frequencies() const;

 private:
  Variant v_;
};

Vector forcing_eval(const Forcing& forcing, std::size_t n);

bool operator==(const Kernel& a, const Kernel& b);
bool operator==(const Forcing& a, const Forcing& b);
bool operator==(const VolterraSystem& a, const VolterraSystem& b);

}  // namespace volterra
