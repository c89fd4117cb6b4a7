#pragma once

// Z-transforms  x~(z) = sum_{j>=0} x(j) z^{-j}  of tabulated sequences and of
// kernels. Tabulated data is only summed for |z| > 1; kernels with closed forms
// are continued analytically inside the disk.

#include "volterra/model.hpp"
#include "volterra/sequence.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace volterra {

struct ZValue {
  Matrix value;
  /// 0 for closed-form evaluations.
  double truncation_bound = 0.0;
};

/// z is outside the region where the requested transform is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// z hit a pole r_j of a geometric-sum kernel.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Partial sum over the stored window. `tail_sup` bounds ‖x(n)‖ for n past the
/// window; it defaults to the sup of the stored values. Pass 0 for a sequence
/// that is genuinely zero beyond its table. Requires |z| > 1.
ZValue zt_sequence(const Sequence& x, cplx z, std::optional<double> tail_sup = std::nullopt);

/// Finite: z != 0, exact. Geometric sum: exact everywhere except the poles.
/// Tabulated: |z| >= 1, bounded by tail_norm_bound |z|^{-count}.
ZValue zt_kernel(const Kernel& kernel, cplx z);

/// A residual compared against the bound it must respect.
struct RuleCheck {
  double residual = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// (Sx)~(z) against z x~(z) - z x(0).
RuleCheck shift_rule_check(const Sequence& x, cplx z, std::optional<double> tail_sup = std::nullopt);

/// (B * x)~(z) against B~(z) x~(z), for x zero past its window. The bound
/// collects the products B(k) x(j) with j + k past the window.
RuleCheck convolution_rule_check(const Kernel& kernel, const Sequence& x, cplx z);

struct InitialValueCheck {
  std::vector<double> radii;
  std::vector<double> gaps;       // ‖x~(s e^{iφ}) - x(0)‖
  std::vector<double> envelopes;  // sum_{j>=1} ‖x(j)‖ s^{-j}, decreasing in s
  double final_bound = 0.0;       // sup‖x‖ / (s_last - 1)
  bool gaps_monotone = false;     // informational; cancellations can break it
  bool holds = false;
};

/// Each gap must lie under the decreasing envelope and the last one under
/// sup‖x‖ / (s - 1).
InitialValueCheck initial_value_check(const Sequence& x, std::vector<double> radii = {10.0, 100.0, 1000.0},
                                      double direction = 0.0);

/// Central-difference estimate of ‖∂f/∂z̄‖ for f = B~ at z. Close to zero off
/// the poles for closed-form kernels.
double cauchy_riemann_defect(const Kernel& kernel, cplx z, double h = 1e-4);

}  // namespace volterra
