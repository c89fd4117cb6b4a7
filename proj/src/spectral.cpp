#include "volterra/spectral.hpp"

#include "volterra/solver.hpp"
#include "volterra/ztransform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace volterra {

Matrix delta(const VolterraSystem& system, cplx z) {
  const Index d = system.dim();
  return z * Matrix::Identity(d, d) - system.a() - zt_kernel(system.kernel(), z).value;
}

namespace {

double sigma_at(const VolterraSystem& system, double theta) {
  return smallest_singular_value(delta(system, unit(theta)));
}

ScanSample sample(const VolterraSystem& system, std::size_t i, std::size_t grid) {
  const double theta = kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
  return {theta, sigma_at(system, theta)};
}

void require_grid(std::size_t grid) {
  if (grid < 16) throw std::invalid_argument("circle scans need at least 16 grid points");
}

/// Minimizes σ_min(Δ(e^{iθ})) over [lo, hi] until the bracket is below `width`.
std::pair<double, double> golden_minimize(const VolterraSystem& system, double lo, double hi, double width) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = sigma_at(system, c), fd = sigma_at(system, d);
  while (b - a > width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = sigma_at(system, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = sigma_at(system, d);
    }
  }
  const double theta = fc <= fd ? c : d;
  return {wrap_angle(theta), std::min(fc, fd)};
}

/// Merges points closer than `radius` along the circle, keeping the smallest residual.
std::vector<SingularPoint> merge_clusters(std::vector<SingularPoint> points, double radius) {
  // Refinement around θ = 0 can land a hair below 2π.
  for (auto& p : points)
    if (kTwoPi - p.angle < 1e-12) p.angle = 0.0;
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });
  std::vector<SingularPoint> out;
  for (const auto& p : points) {
    if (!out.empty() && angular_distance(out.back().angle, p.angle) <= radius) {
      if (p.residual < out.back().residual) out.back() = p;
      continue;
    }
    out.push_back(p);
  }
  if (out.size() > 1 && angular_distance(out.front().angle, out.back().angle) <= radius) {
    if (out.back().residual < out.front().residual) out.front() = out.back();
    out.pop_back();
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });
  }
  return out;
}

/// Ascending coefficients of prod_j (z - r_j), skipping index `skip`.
std::vector<cplx> root_product(const std::vector<GeometricTerm>& terms, std::size_t skip) {
  std::vector<cplx> q{1.0};
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (j == skip) continue;
    std::vector<cplx> next(q.size() + 1, 0.0);
    for (std::size_t k = 0; k < q.size(); ++k) {
      next[k + 1] += q[k];
      next[k] -= terms[j].ratio * q[k];
    }
    q = std::move(next);
  }
  return q;
}

}  // namespace

std::vector<ScanSample> scan_circle(const VolterraSystem& system, std::size_t grid) {
  require_grid(grid);
  std::vector<ScanSample> out(grid);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid); ++i)
    out[static_cast<std::size_t>(i)] = sample(system, static_cast<std::size_t>(i), grid);
  return out;
}

std::vector<ScanSample> scan_circle_serial(const VolterraSystem& system, std::size_t grid) {
  require_grid(grid);
  std::vector<ScanSample> out(grid);
  for (std::size_t i = 0; i < grid; ++i) out[i] = sample(system, i, grid);
  return out;
}

std::string to_string(SigmaMethod m) {
  return m == SigmaMethod::polynomial_roots ? "polynomial-roots" : "scan-refine";
}

std::optional<std::vector<Matrix>> characteristic_polynomial(const VolterraSystem& system) {
  const Index d = system.dim();
  const Matrix I = Matrix::Identity(d, d);
  const auto& a = system.a();
  if (const auto* f = std::get_if<FiniteKernel>(&system.kernel().variant())) {
    const std::size_t m = f->terms.size();
    if (m == 0) return std::vector<Matrix>{-a, I};
    std::vector<Matrix> p(m + 1, Matrix::Zero(d, d));
    p[m] = I;
    p[m - 1] = -a - f->terms[0];
    for (std::size_t n = 1; n < m; ++n) p[m - 1 - n] = -f->terms[n];
    return p;
  }
  if (const auto* g = std::get_if<GeometricSumKernel>(&system.kernel().variant())) {
    const std::size_t k = g->terms.size();
    const auto q = root_product(g->terms, k);
    std::vector<Matrix> p(k + 2, Matrix::Zero(d, d));
    // q(z) (zI - A)
    for (std::size_t i = 0; i < q.size(); ++i) {
      p[i + 1] += q[i] * I;
      p[i] -= q[i] * a;
    }
    // - sum_j C_j z prod_{i != j} (z - r_i)
    for (std::size_t j = 0; j < k; ++j) {
      const auto qj = root_product(g->terms, j);
      for (std::size_t i = 0; i < qj.size(); ++i) p[i + 1] -= qj[i] * g->terms[j].coefficient;
    }
    return p;
  }
  return std::nullopt;
}

SingularSet find_sigma_scan(const VolterraSystem& system, const SpectralTolerances& tol) {
  SingularSet out;
  out.method = SigmaMethod::scan_refine;
  const auto profile = scan_circle(system, tol.grid);
  const std::size_t m = profile.size();
  const double step = kTwoPi / static_cast<double>(m);
  // A grid value can sit at most slope * step above the true minimum nearby.
  double slope = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    slope = std::max(slope, std::abs(profile[(i + 1) % m].sigma_min - profile[i].sigma_min) / step);
  std::vector<std::size_t> minima;
  for (std::size_t i = 0; i < m; ++i) {
    const double prev = profile[(i + m - 1) % m].sigma_min;
    const double next = profile[(i + 1) % m].sigma_min;
    const double here = profile[i].sigma_min;
    if (here < prev && here <= next && here - 2.0 * slope * step <= tol.singular_tol) minima.push_back(i);
  }
  std::vector<SingularPoint> refined(minima.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(minima.size()); ++j) {
    const double center = profile[minima[static_cast<std::size_t>(j)]].angle;
    const auto [theta, value] = golden_minimize(system, center - step, center + step, 1e-12);
    refined[static_cast<std::size_t>(j)] = {theta, value, tol.cluster_radius};
  }
  std::vector<SingularPoint> accepted;
  for (const auto& p : refined)
    if (p.residual <= tol.singular_tol) accepted.push_back(p);
  out.points = merge_clusters(std::move(accepted), tol.cluster_radius);
  return out;
}

SingularSet find_sigma_polynomial(const VolterraSystem& system, const SpectralTolerances& tol) {
  const auto poly = characteristic_polynomial(system);
  const Index d = system.dim();
  if (!poly) {
    auto out = find_sigma_scan(system, tol);
    out.warnings.push_back("tabulated kernel has no closed-form characteristic polynomial; used the circle scan");
    return out;
  }
  const auto degree = static_cast<std::size_t>(poly->size() - 1);
  const std::size_t total = degree * static_cast<std::size_t>(d);
  bool finite = true;
  for (const auto& c : *poly) finite = finite && all_finite(c);
  if (total > tol.max_degree || !finite) {
    auto out = find_sigma_scan(system, tol);
    out.warnings.push_back("characteristic polynomial of degree " + std::to_string(total) +
                           " is too large or not finite; used the circle scan");
    return out;
  }

  SingularSet out;
  out.method = SigmaMethod::polynomial_roots;
  const auto n = static_cast<Index>(total);
  Matrix companion = Matrix::Zero(n, n);
  const auto deg = static_cast<Index>(degree);
  for (Index i = 0; i + 1 < deg; ++i) companion.block(i * d, (i + 1) * d, d, d) = Matrix::Identity(d, d);
  for (Index k = 0; k < deg; ++k) companion.block((deg - 1) * d, k * d, d, d) = -(*poly)[static_cast<std::size_t>(k)];
  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    auto scan = find_sigma_scan(system, tol);
    scan.warnings.push_back("companion eigenvalue iteration failed; used the circle scan");
    return scan;
  }
  const auto& eig = solver.eigenvalues();
  out.roots.assign(eig.data(), eig.data() + eig.size());
  std::sort(out.roots.begin(), out.roots.end(), [](cplx a, cplx b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : std::arg(a) < std::arg(b);
  });

  // Roots of multiplicity k only come out within ~eps^{1/k} of the circle, so
  // near misses are confirmed on the circle itself.
  constexpr double kBand = 1e-4;
  std::vector<SingularPoint> accepted;
  for (const cplx root : out.roots) {
    const double off = std::abs(std::abs(root) - 1.0);
    if (off > kBand) continue;
    const double theta = wrap_angle(std::arg(root));
    if (off <= tol.root_circle_tol) {
      accepted.push_back({theta, sigma_at(system, theta), tol.cluster_radius});
      continue;
    }
    const double w = 2.0 * off + 1e-10;
    const auto [t, value] = golden_minimize(system, theta - w, theta + w, 1e-12);
    if (value <= tol.singular_tol) accepted.push_back({t, value, tol.cluster_radius});
  }
  out.points = merge_clusters(std::move(accepted), tol.cluster_radius);
  return out;
}

SingularSet find_sigma(const VolterraSystem& system, const SpectralTolerances& tol) {
  if (system.kernel().is_closed_form()) return find_sigma_polynomial(system, tol);
  return find_sigma_scan(system, tol);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::AsymptoticallyStable: return "AsymptoticallyStable";
    case Verdict::KTDifferenceConvergent: return "KTDifferenceConvergent";
    case Verdict::StableByAbelTest: return "StableByAbelTest";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::UnstableEvidence: return "UnstableEvidence";
  }
  return "Inconclusive";
}

BoundednessEvidence boundedness(const Sequence& x, double max_slope, std::size_t windows) {
  BoundednessEvidence out;
  if (x.empty()) {
    out.bounded = true;
    return out;
  }
  out.sup_norm = x.sup_norm();
  if (!std::isfinite(out.sup_norm)) return out;
  const std::size_t begin = x.size() / 2;
  const std::size_t span = x.size() - begin;
  windows = std::max<std::size_t>(2, std::min(windows, span));
  std::vector<double> centers, logs;
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t lo = begin + span * w / windows;
    const std::size_t hi = begin + span * (w + 1) / windows;
    if (hi <= lo) continue;
    double m = 0.0;
    for (std::size_t n = lo; n < hi; ++n) m = std::max(m, x.norm_at(n));
    centers.push_back(0.5 * static_cast<double>(lo + hi - 1));
    logs.push_back(std::log(std::max(m, 1e-300)));
  }
  if (centers.size() < 2) {
    out.bounded = true;
    return out;
  }
  const auto k = static_cast<double>(centers.size());
  double mc = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    mc += centers[i] / k;
    ml += logs[i] / k;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    num += (centers[i] - mc) * (logs[i] - ml);
    den += (centers[i] - mc) * (centers[i] - mc);
  }
  out.slope = den > 0.0 ? num / den : 0.0;
  out.bounded = out.slope <= max_slope;
  return out;
}

ClassificationReport classify(const VolterraSystem& system, const ClassifyOptions& options) {
  if (options.horizon < 64) throw std::invalid_argument("classification needs a horizon of at least 64 steps");
  ClassificationReport report;
  report.sigma = find_sigma(system, options.spectral);
  report.sigma_empty = report.sigma.points.empty();
  report.sigma_subset_one = std::all_of(report.sigma.points.begin(), report.sigma.points.end(), [&](const auto& p) {
    return angular_distance(p.angle, 0.0) <= options.spectral.cluster_radius;
  });

  const std::size_t n = options.horizon;
  OperatorTrajectory X;
  try {
    X = n > 1024 ? resolvent_fast(system, n) : resolvent(system, n);
  } catch (const OverflowError& e) {
    report.boundedness.overflow_step = e.step();
    report.boundedness.sup_norm = std::numeric_limits<double>::infinity();
    report.verdict = Verdict::UnstableEvidence;
    return report;
  }
  report.boundedness = boundedness(X, options.growth_slope, options.growth_windows);

  const Sequence diffs = differences(X);
  for (std::size_t k = diffs.size() - diffs.size() / 4; k < diffs.size(); ++k)
    report.kt_tail_difference = std::max(report.kt_tail_difference, diffs.norm_at(k));

  AbelOptions abel;
  abel.schedule = options.abel_schedule;
  abel.window_start = n / 4;
  abel.window_length = n / 4;
  abel.tol = options.abel_tol;
  for (const auto& p : report.sigma.points) report.abel.push_back(abel_test(X, p.angle, abel));

  const bool bounded = report.boundedness.bounded;
  report.kt_difference_convergent = bounded && report.sigma_subset_one;
  const bool all_pass = std::all_of(report.abel.begin(), report.abel.end(), [](const auto& r) { return r.passed; });
  if (!bounded)
    report.verdict = Verdict::UnstableEvidence;
  else if (report.sigma_empty)
    report.verdict = Verdict::AsymptoticallyStable;
  else if (report.sigma_subset_one)
    report.verdict = all_pass ? Verdict::AsymptoticallyStable : Verdict::KTDifferenceConvergent;
  else if (all_pass)
    report.verdict = Verdict::StableByAbelTest;
  else
    report.verdict = Verdict::Inconclusive;
  return report;
}

}  // namespace volterra
