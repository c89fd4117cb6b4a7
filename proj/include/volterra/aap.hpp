#pragma once

// Decay, almost-periodicity and difference-convergence diagnostics on
// computed trajectories. A sequence is treated as asymptotically almost
// periodic when removing finitely many fitted frequencies leaves a remainder
// that decays.

#include "volterra/sequence.hpp"

#include <vector>

namespace volterra {

struct C0Result {
  bool passed = false;
  std::vector<double> profile;  // window maxima of ‖x(n)‖
};

/// Maxima of ‖x(n)‖ over `windows` equal windows. Passes when the maxima
/// decrease strictly until they reach `tol`, stay at or below `tol` from then
/// on, and the last one is at or below `tol`.
C0Result c0_test(const Sequence& x, double tol = 1e-3, std::size_t windows = 8);

/// c0_test on X(n+1) - X(n).
C0Result kt_difference_test(const Sequence& X, double tol = 1e-3, std::size_t windows = 8);

/// (1/N) sum_{n<N} x(offset + n) e^{-i(offset+n)θ}.
Matrix bohr_coefficient(const Sequence& x, double theta, std::size_t count, std::size_t offset = 0);

struct AapOptions {
  double tol = 1e-3;  // relative to sup‖x‖
  std::size_t windows = 8;
};

struct AAPDecomposition {
  std::vector<double> frequencies;
  std::vector<Matrix> coefficients;
  std::vector<double> remainder_profile;
  bool is_aap = false;
};

/// Coefficients are fitted on the late half of the window, where transients
/// have died out, by least squares over the candidate exponentials (Bohr means
/// corrected for mutual leakage). Rejects candidates closer than 2π/N.
AAPDecomposition aap_decompose(const Sequence& x, const std::vector<double>& frequencies,
                               const AapOptions& options = {});

/// x minus the fitted almost periodic part, over the whole window.
Sequence remove_frequencies(const Sequence& x, const std::vector<double>& frequencies);

struct FrequencyOptions {
  /// Stop when the next component is below this fraction of the late sup.
  double threshold = 1e-2;
  std::size_t max_frequencies = 16;
};

/// Greedy frequency search on the late half: Hann-windowed padded FFT peak,
/// golden-section refinement, joint least-squares removal, repeat.
std::vector<double> detect_frequencies(const Sequence& x, const FrequencyOptions& options = {});

}  // namespace volterra
