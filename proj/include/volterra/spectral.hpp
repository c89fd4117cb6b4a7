#pragma once

// The characteristic operator Δ(z) = zI - A - B~(z), its singular set Σ on the
// unit circle, and the classification of a system from Σ, the empirical size
// of the resolvent sequence and Abel-type limits at the points of Σ.

#include "volterra/model.hpp"
#include "volterra/seqspec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace volterra {

Matrix delta(const VolterraSystem& system, cplx z);

struct ScanSample {
  double angle = 0.0;
  double sigma_min = 0.0;
};

/// σ_min(Δ(e^{iθ})) on `grid` equispaced angles starting at θ = 0.
std::vector<ScanSample> scan_circle(const VolterraSystem& system, std::size_t grid);
std::vector<ScanSample> scan_circle_serial(const VolterraSystem& system, std::size_t grid);

struct SpectralTolerances {
  double singular_tol = 1e-8;     // on σ_min(Δ)
  double root_circle_tol = 1e-8;  // on ||z| - 1|
  std::size_t grid = 2048;
  double cluster_radius = 1e-6;
  std::size_t max_degree = 64;  // of det Δ after clearing denominators
};

enum class SigmaMethod { polynomial_roots, scan_refine };

std::string to_string(SigmaMethod m);

struct SingularPoint {
  double angle = 0.0;
  double residual = 0.0;  // σ_min(Δ(e^{iθ}))
  double radius = 0.0;    // localization radius
};

struct SingularSet {
  std::vector<SingularPoint> points;  // sorted by angle
  SigmaMethod method = SigmaMethod::scan_refine;
  /// All roots of the cleared polynomial (polynomial path only).
  std::vector<cplx> roots;
  std::vector<std::string> warnings;
};

/// Polynomial path when the kernel has a closed form and the degree is at most
/// `max_degree`, scan path otherwise.
SingularSet find_sigma(const VolterraSystem& system, const SpectralTolerances& tol = {});
/// Roots of the monic matrix polynomial z^{m-1} Δ(z) (finite kernels) or
/// prod_j (z - r_j) Δ(z) (geometric sums), via block companion linearization.
/// Falls back to the scan path with a warning when not applicable.
SingularSet find_sigma_polynomial(const VolterraSystem& system, const SpectralTolerances& tol = {});
/// Local minima of the scan, refined by golden-section search.
SingularSet find_sigma_scan(const VolterraSystem& system, const SpectralTolerances& tol = {});

/// Coefficients P_0..P_m (ascending, P_m = I) of the cleared polynomial, or
/// nothing for tabulated kernels.
std::optional<std::vector<Matrix>> characteristic_polynomial(const VolterraSystem& system);

enum class Verdict { AsymptoticallyStable, KTDifferenceConvergent, StableByAbelTest, Inconclusive, UnstableEvidence };

std::string to_string(Verdict v);

struct ClassifyOptions {
  std::size_t horizon = 4096;
  SpectralTolerances spectral;
  /// Maximal least-squares slope of log window maxima over the last half.
  double growth_slope = 1e-3;
  std::size_t growth_windows = 16;
  double abel_tol = 1e-2;
  std::vector<double> abel_schedule = {1.1, 1.05, 1.025, 1.0125, 1.00625};
};

struct BoundednessEvidence {
  bool bounded = false;
  double sup_norm = 0.0;
  double slope = 0.0;
  std::optional<std::size_t> overflow_step;
};

struct ClassificationReport {
  SingularSet sigma;
  bool sigma_empty = false;
  bool sigma_subset_one = false;
  BoundednessEvidence boundedness;
  std::vector<RayLimitEstimate> abel;
  /// max ‖X(n+1) - X(n)‖ over the last quarter of the horizon.
  double kt_tail_difference = 0.0;
  /// Σ ⊆ {1} with a bounded resolvent, whatever the final verdict.
  bool kt_difference_convergent = false;
  Verdict verdict = Verdict::Inconclusive;
};

/// Least-squares slope of log window maxima of ‖x(n)‖ over the last half.
BoundednessEvidence boundedness(const Sequence& x, double max_slope, std::size_t windows);

ClassificationReport classify(const VolterraSystem& system, const ClassifyOptions& options = {});

}  // namespace volterra
