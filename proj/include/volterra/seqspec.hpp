#pragma once

// Spectral estimates for bounded unilateral sequences. The quotient norm on
// l∞/c0 is approximated by a late-window maximum, and the resolvent of the
// shift by truncated sums  R(λ,S)x(k) = sum_n λ^{-n-1} x(n+k).

#include "volterra/sequence.hpp"

#include <optional>
#include <vector>

namespace volterra {

struct QuotientNormEstimate {
  double value = 0.0;
  std::size_t window_start = 0;
  std::size_t window_end = 0;  // inclusive
};

/// max_{K0 <= k <= K1} ‖x(k)‖.
QuotientNormEstimate quotient_norm(const Sequence& x, std::size_t k0, std::size_t k1);

struct ShiftResolvent {
  std::size_t first = 0;
  Sequence values;  // R(λ,S)x(k) for k = first, first + 1, ...
  /// Uniform bound on the neglected tail: sup·|λ|^{-M}/(|λ|-1).
  double truncation_bound = 0.0;
  std::size_t terms = 0;  // M, the fewest terms used at any k
};

/// R(λ,S)x(k) for k in [first, last], using every stored value past k.
/// Requires |λ| > 1 and last < x.size(). `tail_sup` bounds ‖x‖ past the window.
ShiftResolvent resolvent_S(const Sequence& x, cplx lambda, std::size_t first, std::size_t last,
                           std::optional<double> tail_sup = std::nullopt);

struct RaySample {
  double s = 0.0;
  double estimate = 0.0;  // (s-1)·(quotient norm of R(sξ0,S)x + truncation)
};

struct RayLimitEstimate {
  double angle = 0.0;
  std::vector<RaySample> samples;
  double limit = 0.0;
  bool passed = false;
};

struct AbelOptions {
  std::vector<double> schedule = {1.1, 1.05, 1.025, 1.0125, 1.00625};
  std::size_t window_start = 1000;
  std::size_t window_length = 1000;
  double tol = 1e-2;
};

/// (s-1)‖R(sξ0, S̄)x̄‖ along the schedule, extrapolated to s = 1.
RayLimitEstimate abel_test(const Sequence& x, double angle, const AbelOptions& options = {});

struct SpectrumOptions {
  std::size_t grid = 2048;
  /// Values of s - 1, decreasing.
  std::vector<double> schedule = {0.1, 0.05, 0.025, 0.0125, 0.00625};
  std::size_t window_start = 1000;
  std::size_t window_length = 1000;
  /// The window for s - 1 = h starts at max(window_start, window_scale / h) so
  /// that slowly decaying tails are seen at a scale comparable to 1/h.
  double window_scale = 100.0;
  /// Terms kept in each resolvent sum: s^{-M} <= truncation_tol.
  double truncation_tol = 1e-8;
  double threshold = 0.5;
  /// Scores are zero where (s-1)·Q stays below amplitude_floor·sup‖x‖.
  double amplitude_floor = 1e-8;
};

struct ZSpectrumOptions {
  std::size_t grid = 2048;
  /// Values of s - 1, decreasing.
  std::vector<double> schedule = {0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125, 0.0015625, 0.00078125};
  double ratio_threshold = 3.0;
};

struct SpectrumEstimate {
  std::vector<double> angles;
  std::vector<double> scores;
  std::vector<double> detected;  // sorted angles, widened by one grid step
};

/// Sequence length estimate_spectrum needs for these options.
std::size_t required_length(const SpectrumOptions& options);

/// score(θ) = fitted γ in Q(R(s e^{iθ}, S)x) ∝ (s-1)^{-γ}; detection keeps the
/// local maxima with γ >= threshold.
SpectrumEstimate estimate_spectrum(const Sequence& x, const SpectrumOptions& options = {});
SpectrumEstimate estimate_spectrum_serial(const Sequence& x, const SpectrumOptions& options = {});

/// score(θ) = ‖x~(s_last e^{iθ})‖ / ‖x~(s_first e^{iθ})‖; detected where it
/// exceeds ratio_threshold.
SpectrumEstimate estimate_z_spectrum(const Sequence& x, const ZSpectrumOptions& options = {});

/// Spectrum modulo asymptotically almost periodic sequences: the given
/// frequencies are fitted and removed before estimating.
SpectrumEstimate estimate_spectrum_modulo_aap(const Sequence& x, const std::vector<double>& frequencies,
                                              const SpectrumOptions& options = {});

struct InclusionResult {
  bool holds = true;
  double worst_angle = 0.0;
  double worst_distance = 0.0;
};

/// Every inner angle within `tol` of some outer angle (circular distance).
InclusionResult check_inclusion(const std::vector<double>& inner, const std::vector<double>& outer, double tol);

}  // namespace volterra
