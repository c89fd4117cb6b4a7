#include "volterra/acceptance.hpp"

#include "volterra/aap.hpp"
#include "volterra/gallery.hpp"
#include "volterra/seqspec.hpp"
#include "volterra/solver.hpp"
#include "volterra/spectral.hpp"
#include "volterra/ztransform.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>

namespace volterra {

namespace {

using Rng = std::mt19937_64;

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

cplx normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(2.0));
  const double re = n(rng);
  return {re, n(rng)};
}

cplx in_disk(Rng& rng, double rmin, double rmax) { return std::polar(uniform(rng, rmin, rmax), uniform(rng, 0.0, kTwoPi)); }

Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Vector random_vector(Rng& rng, Index d) { return random_matrix(rng, d, 1); }

Matrix random_unitary(Rng& rng, Index d) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, d, d));
  return qr.householderQ() * Matrix::Identity(d, d);
}

VolterraSystem scalar_demo(double b) {
  return VolterraSystem(Matrix::Constant(1, 1, 0.5),
                        Kernel(GeometricSumKernel{1, {{Matrix::Constant(1, 1, b), cplx(0.5, 0.0)}}}));
}

double sup_difference(const Sequence& a, const Sequence& b) {
  double worst = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) worst = std::max(worst, operator_norm(a[n] - b[n]));
  return worst;
}

CriterionResult start(int id, const std::string& key, const std::string& title) {
  CriterionResult r;
  r.id = id;
  r.key = key;
  r.title = title;
  return r;
}

// 1. X(n) = 2/3 + (1/3) 0.25^n for a = 0.5, B(n) = 0.25 * 0.5^n.
CriterionResult resolvent_criterion(std::uint64_t) {
  auto r = start(1, "resolvent", "resolvent matches partial-fraction closed form");
  Stopwatch clock;
  const auto X = resolvent(scalar_demo(0.25), 100);
  double err = 0.0;
  for (std::size_t n = 0; n <= 100; ++n)
    err = std::max(err, std::abs(X[n](0, 0) - (2.0 / 3.0 + std::pow(0.25, static_cast<double>(n)) / 3.0)));
  r.seconds = clock.seconds();
  const bool fast_enough = r.seconds < 1.0;
  r.passed = err <= 1e-10 && fast_enough;
  r.measured = {{"horizon", 100}, {"max_error", err}, {"tolerance", 1e-10}};
  r.summary = "max |X(n) - oracle| = " + sci(err) + " over n <= 100 (tol 1e-10), " + sci(r.seconds) + " s (limit 1 s)";
  return r;
}

// 2. Σ = {1} and X(n+1) - X(n) = -0.25^n / 4.
CriterionResult kt_criterion(std::uint64_t) {
  auto r = start(2, "kt", "Σ = {1} and resolvent differences decay like 0.25^n/4");
  Stopwatch clock;
  const auto system = scalar_demo(0.25);
  const auto sigma = find_sigma(system);
  const bool sigma_ok = sigma.points.size() == 1 && angular_distance(sigma.points.front().angle, 0.0) <= 1e-6;

  // Differences near 1e-91 sit far below double resolution of X(n) ~ 2/3, so
  // they come from the difference recursion carried in extended precision.
  const auto D = resolvent_differences_extended(system, 201);
  double max_diff = 0.0, worst_ratio = 1.0;
  bool ratios_ok = true;
  for (std::size_t n = 150; n <= 200; ++n) {
    const double value = std::abs(D[n](0, 0));
    const double oracle = std::pow(0.25, static_cast<double>(n)) / 4.0;
    const double ratio = value / oracle;
    max_diff = std::max(max_diff, value);
    if (std::abs(std::log(ratio)) > std::abs(std::log(worst_ratio))) worst_ratio = ratio;
    ratios_ok = ratios_ok && ratio >= 0.5 && ratio <= 2.0;
  }
  const auto X = resolvent(system, 201);
  double double_diff = 0.0;
  for (std::size_t n = 150; n <= 200; ++n) double_diff = std::max(double_diff, std::abs(X[n + 1](0, 0) - X[n](0, 0)));
  r.seconds = clock.seconds();
  r.passed = sigma_ok && max_diff <= 1e-20 && ratios_ok && r.seconds < 5.0;
  Json angles = Json::array();
  for (const auto& p : sigma.points) angles.push_back(p.angle);
  r.measured = {{"sigma_angles", angles},
                {"sigma_method", to_string(sigma.method)},
                {"max_difference_150_200", max_diff},
                {"worst_ratio_to_oracle", worst_ratio},
                {"double_precision_subtraction_max", double_diff}};
  r.summary = "Σ = " + std::to_string(sigma.points.size()) + " point(s) at angle " +
              (sigma.points.empty() ? std::string("-") : sci(sigma.points.front().angle)) +
              ", max |D(n)| on [150,200] = " + sci(max_diff) + ", worst ratio to 0.25^n/4 = " + sci(worst_ratio) + ", " +
              sci(r.seconds) + " s";
  return r;
}

// 3. a = 0.5, B(n) = 0.125 * 0.5^n: Σ empty, X(n) -> 0.
CriterionResult empty_sigma_criterion(std::uint64_t) {
  auto r = start(3, "empty-sigma", "empty Σ and decaying resolvent");
  Stopwatch clock;
  const auto system = scalar_demo(0.125);
  const auto poly = find_sigma_polynomial(system);
  const auto scan = find_sigma_scan(system);
  const auto X = resolvent(system, 100);
  const double x100 = std::abs(X[100](0, 0));
  // Roots of z^2 - 1.125 z + 0.25 and X(0) = 1, X(1) = 0.625.
  const double disc = std::sqrt(1.125 * 1.125 - 1.0);
  const double z1 = 0.5 * (1.125 + disc), z2 = 0.5 * (1.125 - disc);
  const double alpha = (0.625 - z2) / (z1 - z2);
  const double oracle = alpha * std::pow(z1, 100.0) + (1.0 - alpha) * std::pow(z2, 100.0);
  r.seconds = clock.seconds();
  r.passed = poly.points.empty() && scan.points.empty() && x100 <= 1e-6 && r.seconds < 5.0;
  r.measured = {{"polynomial_points", poly.points.size()},
                {"scan_points", scan.points.size()},
                {"abs_X100", x100},
                {"oracle_X100", oracle},
                {"relative_gap_to_oracle", std::abs(x100 - oracle) / oracle}};
  r.summary = "polynomial Σ size " + std::to_string(poly.points.size()) + ", scan Σ size " +
              std::to_string(scan.points.size()) + ", |X(100)| = " + sci(x100) + " (oracle " + sci(oracle) + "), " +
              sci(r.seconds) + " s";
  return r;
}

// 4. Shift, convolution and initial value rules on random data.
CriterionResult ztransform_criterion(std::uint64_t seed) {
  auto r = start(4, "ztransform", "Z-transform shift, convolution and initial value rules");
  Rng rng(seed + 4);
  std::size_t shift_fail = 0, conv_fail = 0, init_fail = 0, checks = 0;
  double worst_shift = 0.0, worst_conv = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = static_cast<Index>(uniform_int(rng, 1, 2));
    const std::size_t len = uniform_int(rng, 1, 128);
    const Sequence x = Sequence::generate(d, 1, len, [&](std::size_t) { return random_vector(rng, d); });
    Kernel kernel = Kernel::zero(d);
    if (trial % 2 == 0) {
      std::vector<Matrix> terms;
      const std::size_t m = uniform_int(rng, 1, 16);
      for (std::size_t k = 0; k < m; ++k) terms.push_back(0.3 * random_matrix(rng, d, d));
      kernel = Kernel(FiniteKernel{d, std::move(terms)});
    } else {
      std::vector<GeometricTerm> terms;
      const std::size_t m = uniform_int(rng, 1, 3);
      for (std::size_t k = 0; k < m; ++k) terms.push_back({0.3 * random_matrix(rng, d, d), in_disk(rng, 0.0, 0.9)});
      kernel = Kernel(GeometricSumKernel{d, std::move(terms)});
    }
    for (int j = 0; j < 10; ++j) {
      const cplx z = std::polar(uniform(rng, 1.1, 3.0), uniform(rng, 0.0, kTwoPi));
      ++checks;
      const auto s = shift_rule_check(x, z, 0.0);
      const auto c = convolution_rule_check(kernel, x, z);
      const auto iv = initial_value_check(x, {10.0, 100.0, 1000.0}, std::arg(z));
      shift_fail += s.holds ? 0 : 1;
      conv_fail += c.holds ? 0 : 1;
      init_fail += iv.holds ? 0 : 1;
      worst_shift = std::max(worst_shift, s.bound > 0.0 ? s.residual / s.bound : s.residual);
      worst_conv = std::max(worst_conv, c.bound > 0.0 ? c.residual / c.bound : c.residual);
    }
  }
  r.passed = shift_fail + conv_fail + init_fail == 0;
  r.measured = {{"checks", checks},
                {"shift_failures", shift_fail},
                {"convolution_failures", conv_fail},
                {"initial_value_failures", init_fail},
                {"worst_shift_residual_over_bound", worst_shift},
                {"worst_convolution_residual_over_bound", worst_conv}};
  r.summary = std::to_string(checks) + " (sequence, z) pairs: failures shift " + std::to_string(shift_fail) +
              ", convolution " + std::to_string(conv_fail) + ", initial value " + std::to_string(init_fail);
  return r;
}

// 5. x(n) = 1/n: σ(x) empty while 1 ∈ σ_Z(x).
CriterionResult separation_criterion(std::uint64_t) {
  auto r = start(5, "separation", "σ(1/n) is empty while σ_Z(1/n) contains 0");
  Stopwatch clock;
  const SpectrumOptions options;
  const std::size_t len = std::max<std::size_t>(required_length(options), 20000);
  const Sequence x = Sequence::generate(1, 1, len, [](std::size_t n) {
    return Matrix::Constant(1, 1, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  });
  const auto spec = estimate_spectrum(x, options);
  const double max_gamma = *std::max_element(spec.scores.begin(), spec.scores.end());
  const ZSpectrumOptions zoptions;
  const auto zspec = estimate_z_spectrum(x, zoptions);
  const double step = kTwoPi / static_cast<double>(zoptions.grid);
  const bool zero_flagged = std::any_of(zspec.detected.begin(), zspec.detected.end(),
                                        [&](double a) { return angular_distance(a, 0.0) <= step * 1.0000001; });
  const double s = 1.001;
  const auto zt = zt_sequence(x, s, 1.0 / static_cast<double>(len));
  const double value = std::abs(zt.value(0, 0));
  const double oracle = -std::log(1.0 - 1.0 / s);
  const double gap = std::abs(zt.value(0, 0) - oracle);
  r.seconds = clock.seconds();
  r.passed = spec.detected.empty() && max_gamma < 0.5 && zero_flagged && value >= 6.0 &&
             gap <= zt.truncation_bound + 1e-9 && r.seconds < 10.0;
  r.measured = {{"length", len},
                {"spectrum_detected", spec.detected.size()},
                {"max_gamma", max_gamma},
                {"z_spectrum_flags_zero", zero_flagged},
                {"z_ratio_at_zero", zspec.scores.front()},
                {"zt_at_1_001", value},
                {"oracle_at_1_001", oracle},
                {"zt_gap", gap},
                {"zt_truncation_bound", zt.truncation_bound}};
  r.summary = "max γ = " + sci(max_gamma) + " (detected " + std::to_string(spec.detected.size()) +
              "), σ_Z flags 0: " + (zero_flagged ? "yes" : "no") + ", x~(1.001) = " + sci(value) + " vs " + sci(oracle) +
              ", " + sci(r.seconds) + " s";
  return r;
}

/// Scalar factor with characteristic roots z1, z2 and kernel ratio rk:
/// (z - a)(z - rk) - b z = (z - z1)(z - z2).
struct ScalarFactor {
  cplx a, b, ratio;
};

ScalarFactor factor_with_roots(cplx z1, cplx z2, cplx rk) {
  const cplx a = z1 * z2 / rk;
  return {a, z1 + z2 - a - rk, rk};
}

// 6. σ(x) ⊂ Σ ∪ {forcing frequency} on random marginal and stable systems.
CriterionResult inclusion_criterion(std::uint64_t seed) {
  auto r = start(6, "inclusion", "solution spectrum lies in Σ ∪ forcing frequencies");
  Rng rng(seed + 6);
  const SpectrumOptions options;
  const std::size_t len = required_length(options);
  std::size_t violations = 0, sigma_mismatch = 0, nonempty = 0;
  double worst = 0.0;
  Json systems = Json::array();
  for (int t = 0; t < 20; ++t) {
    const Index d = t % 4 < 2 ? 1 : 2;
    std::vector<ScalarFactor> factors;
    std::vector<double> marginal;
    for (Index c = 0; c < d; ++c) {
      const bool on_circle = uniform(rng, 0.0, 1.0) < 0.5;
      cplx z1 = in_disk(rng, 0.0, 0.9), z2 = in_disk(rng, 0.0, 0.9);
      if (on_circle) {
        const double phi = uniform(rng, 0.0, kTwoPi);
        z1 = std::polar(1.0, phi);
        marginal.push_back(phi);
      }
      while (std::abs(z1 - z2) < 0.2) z2 = in_disk(rng, 0.0, 0.9);
      factors.push_back(factor_with_roots(z1, z2, in_disk(rng, 0.1, 0.8)));
    }
    const Matrix u = random_unitary(rng, d);
    Matrix a = Matrix::Zero(d, d);
    std::vector<GeometricTerm> terms;
    for (Index c = 0; c < d; ++c) {
      a(c, c) = factors[static_cast<std::size_t>(c)].a;
      Matrix e = Matrix::Zero(d, d);
      e(c, c) = factors[static_cast<std::size_t>(c)].b;
      terms.push_back({u * e * u.adjoint(), factors[static_cast<std::size_t>(c)].ratio});
    }
    const VolterraSystem system(u * a * u.adjoint(), Kernel(GeometricSumKernel{d, std::move(terms)}));
    const auto sigma = find_sigma(system);
    std::vector<double> outer;
    for (const auto& p : sigma.points) outer.push_back(p.angle);
    for (const double phi : marginal)
      if (!check_inclusion({phi}, outer, 1e-6).holds) ++sigma_mismatch;

    Forcing forcing = Forcing::zero(d);
    double omega = -1.0;
    if (t % 2 == 1) {
      do {
        omega = uniform(rng, 0.0, kTwoPi);
      } while (std::any_of(outer.begin(), outer.end(), [&](double s) { return angular_distance(s, omega) <= 0.3; }));
      forcing = Forcing(HarmonicForcing{d, {{omega, random_vector(rng, d)}}});
      outer.push_back(omega);
    }
    const Vector x0 = random_vector(rng, d);
    const auto x = solve_fast(system, forcing, x0, len - 1);
    const auto spec = estimate_spectrum(x, options);
    const auto inc = check_inclusion(spec.detected, outer, 1e-2);
    if (!inc.holds) ++violations;
    if (!spec.detected.empty()) ++nonempty;
    worst = std::max(worst, inc.worst_distance);
    Json detected = Json::array();
    for (const double a : spec.detected) detected.push_back(a);
    Json sig = Json::array();
    for (const auto& p : sigma.points) sig.push_back(p.angle);
    systems.push_back({{"dim", d}, {"sigma", sig}, {"forcing_angle", omega}, {"detected", detected},
                       {"worst_distance", inc.worst_distance}});
  }
  r.passed = violations == 0;
  r.measured = {{"systems", 20},
                {"violations", violations},
                {"worst_distance", worst},
                {"nonempty_estimates", nonempty},
                {"sigma_construction_mismatches", sigma_mismatch},
                {"details", systems}};
  r.summary = "20 systems: " + std::to_string(violations) + " inclusion violations, worst distance " + sci(worst) +
              " (tol 1e-2), " + std::to_string(nonempty) + " nonempty estimates";
  return r;
}

// 7. Contraction systems: decaying forcing gives c0, harmonic forcing gives AAP.
CriterionResult stability_criterion(std::uint64_t) {
  auto r = start(7, "stability", "gallery: decaying forcing is c0, harmonic forcing is AAP");
  const std::size_t n = 2000;
  std::size_t c0_fail = 0, aap_fail = 0, slack_fail = 0;
  Json rows = Json::array();
  for (const auto& g : gallery()) {
    const auto cc = contraction_check(g.system);
    if (!(cc.holds && cc.slack > 0.1)) ++slack_fail;
    const auto xd = solve(g.system, g.decaying, g.x0, n);
    const auto c0 = c0_test(xd, 1e-3);
    if (!c0.passed) ++c0_fail;

    const auto xh = solve(g.system, g.harmonic, g.x0, n);
    const auto freqs = detect_frequencies(xh);
    const auto dec = aap_decompose(xh, freqs);
    const double omega = g.harmonic.frequencies().front();
    const double tol = kTwoPi / static_cast<double>(n);
    const bool matched = !freqs.empty() && std::all_of(freqs.begin(), freqs.end(), [&](double f) {
      return angular_distance(f, omega) <= tol;
    });
    if (!(dec.is_aap && matched)) ++aap_fail;
    Json f = Json::array();
    for (const double a : freqs) f.push_back(a);
    rows.push_back({{"name", g.name},
                    {"slack", cc.slack},
                    {"c0_final_window_max", c0.profile.back()},
                    {"c0_passed", c0.passed},
                    {"forcing_angle", omega},
                    {"detected_frequencies", f},
                    {"remainder_final_window_max", dec.remainder_profile.back()},
                    {"is_aap", dec.is_aap}});
  }
  r.passed = c0_fail + aap_fail + slack_fail == 0;
  r.measured = {{"c0_failures", c0_fail}, {"aap_failures", aap_fail}, {"slack_failures", slack_fail}, {"systems", rows}};
  r.summary = std::to_string(gallery().size()) + " gallery systems: c0 failures " + std::to_string(c0_fail) +
              ", AAP/frequency failures " + std::to_string(aap_fail) + ", slack failures " + std::to_string(slack_fail);
  return r;
}

// 8. Constant forcing never yields a decaying solution; frequency 0 appears.
CriterionResult forced_criterion(std::uint64_t) {
  auto r = start(8, "forced", "constant forcing: no decay, frequency 0 present");
  const std::size_t n = 2000;
  std::size_t failures = 0;
  Json rows = Json::array();
  for (const auto& g : gallery()) {
    const auto x = solve(g.system, unit_constant_forcing(g.system.dim()), g.x0, n);
    const auto c0 = c0_test(x, 1e-3);
    const auto freqs = detect_frequencies(x);
    const bool has_zero = std::any_of(freqs.begin(), freqs.end(), [&](double f) {
      return angular_distance(f, 0.0) <= kTwoPi / static_cast<double>(n);
    });
    if (c0.passed || !has_zero) ++failures;
    rows.push_back({{"name", g.name}, {"c0_passed", c0.passed}, {"final_window_max", c0.profile.back()},
                    {"frequency_zero_detected", has_zero}});
  }
  r.passed = failures == 0;
  r.measured = {{"failures", failures}, {"systems", rows}};
  r.summary = std::to_string(gallery().size()) + " gallery systems with y = 1: " + std::to_string(failures) + " failures";
  return r;
}

VolterraSystem random_contraction(Rng& rng, Index d, int kind, double total) {
  Matrix a = random_matrix(rng, d, d);
  Kernel raw = Kernel::zero(d);
  if (kind == 0) {
    std::vector<Matrix> terms;
    const std::size_t m = uniform_int(rng, 1, 8);
    for (std::size_t k = 0; k < m; ++k) terms.push_back(random_matrix(rng, d, d));
    raw = Kernel(FiniteKernel{d, std::move(terms)});
  } else if (kind == 1) {
    std::vector<GeometricTerm> terms;
    const std::size_t m = uniform_int(rng, 1, 3);
    for (std::size_t k = 0; k < m; ++k) terms.push_back({random_matrix(rng, d, d), in_disk(rng, 0.0, 0.9)});
    raw = Kernel(GeometricSumKernel{d, std::move(terms)});
  } else {
    std::vector<Matrix> values;
    for (int k = 0; k < 50; ++k) values.push_back(std::pow(0.9, k) * random_matrix(rng, d, d));
    raw = Kernel(TabulatedKernel{d, std::move(values), 0.0});
  }
  const double scale = total / (operator_norm(a) + kernel_norm_sum(raw));
  Kernel scaled = std::visit(
      [&](auto k) {
        if constexpr (std::is_same_v<decltype(k), FiniteKernel>) {
          for (auto& t : k.terms) t *= scale;
        } else if constexpr (std::is_same_v<decltype(k), GeometricSumKernel>) {
          for (auto& t : k.terms) t.coefficient *= scale;
        } else {
          for (auto& t : k.values) t *= scale;
        }
        return Kernel(std::move(k));
      },
      raw.variant());
  return VolterraSystem(scale * a, std::move(scaled));
}

// 9. solve_fast against solve; the timing ratio is advisory.
CriterionResult fastpath_criterion(std::uint64_t seed) {
  auto r = start(9, "fastpath", "fast solver matches the direct recursion");
  Rng rng(seed + 9);
  const std::size_t n = 4096;
  double worst = 0.0, naive_time = 0.0, fast_time = 0.0;
  Json rows = Json::array();
  for (int t = 0; t < 10; ++t) {
    const Index d = 1 + t % 3;
    const int kind = (t / 3) % 3;
    const auto system = random_contraction(rng, d, kind, 0.95);
    const Forcing forcing = t % 2 == 0 ? Forcing(HarmonicForcing{d, {{uniform(rng, 0.0, kTwoPi), random_vector(rng, d)}}})
                                       : Forcing(ConstantForcing{random_vector(rng, d)});
    const Vector x0 = random_vector(rng, d);
    Stopwatch c1;
    const auto slow = solve(system, forcing, x0, n);
    naive_time += c1.seconds();
    Stopwatch c2;
    const auto fast = solve_fast(system, forcing, x0, n);
    fast_time += c2.seconds();
    const double diff = sup_difference(slow, fast) / std::max(1.0, slow.sup_norm());
    worst = std::max(worst, diff);
    rows.push_back({{"dim", d}, {"kernel", kind == 0 ? "finite" : kind == 1 ? "geometric-sum" : "tabulated"},
                    {"relative_sup_difference", diff}});
  }
  const double ratio = naive_time / std::max(fast_time, 1e-12);
  r.passed = worst <= 1e-9;
  if (ratio <= 3.0) r.warnings.push_back("naive/fast wall-clock ratio " + sci(ratio) + " is below 3 at N = 4096");
  r.measured = {{"horizon", n}, {"systems", rows}, {"worst_relative_sup_difference", worst}};
  r.summary = "10 systems at N = 4096: worst relative sup difference " + sci(worst) + " (tol 1e-9), naive/fast time ratio " +
              sci(ratio);
  return r;
}

// 10. ‖R(λ,S)x‖ <= ‖x‖ / (|λ| - 1) in the quotient proxy.
CriterionResult shift_bound_criterion(std::uint64_t seed) {
  auto r = start(10, "shift-bound", "shift resolvent bound on gallery sequences");
  Rng rng(seed + 10);
  const std::size_t n = 4000, k0 = 1000, k1 = 1999;
  std::vector<cplx> lambdas;
  for (int i = 0; i < 20; ++i) lambdas.push_back(std::polar(uniform(rng, 1.01, 2.0), uniform(rng, 0.0, kTwoPi)));
  std::size_t violations = 0, checks = 0;
  double worst_ratio = 0.0;
  for (const auto& g : gallery()) {
    for (const Forcing& f : {g.harmonic, g.decaying, unit_constant_forcing(g.system.dim())}) {
      const auto x = solve_fast(g.system, f, g.x0, n - 1);
      const double sup = x.sup_norm();
      const double q = quotient_norm(x, k0, n - 1).value;
      for (const cplx lambda : lambdas) {
        const auto res = resolvent_S(x, lambda, k0, k1, sup);
        const double lhs = quotient_norm(res.values, 0, res.values.size() - 1).value;
        const double rhs = q / (std::abs(lambda) - 1.0) + res.truncation_bound;
        ++checks;
        if (lhs > rhs * (1.0 + 1e-12)) ++violations;
        if (rhs > 0.0) worst_ratio = std::max(worst_ratio, lhs / rhs);
      }
    }
  }
  r.passed = violations == 0;
  r.measured = {{"checks", checks}, {"violations", violations}, {"worst_lhs_over_rhs", worst_ratio}};
  r.summary = std::to_string(checks) + " (sequence, λ) pairs: " + std::to_string(violations) +
              " violations, worst lhs/rhs " + sci(worst_ratio);
  return r;
}

using Criterion = std::function<CriterionResult(std::uint64_t)>;

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {resolvent_criterion, kt_criterion,         empty_sigma_criterion,
                                             ztransform_criterion, separation_criterion, inclusion_criterion,
                                             stability_criterion, forced_criterion,     fastpath_criterion,
                                             shift_bound_criterion};
  return all;
}

}  // namespace

bool AcceptanceReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

const std::vector<std::string>& acceptance_keys() {
  static const std::vector<std::string> keys = {"resolvent", "kt",        "empty-sigma",   "ztransform", "separation",
                                                "inclusion", "stability", "forced", "fastpath",   "shift-bound"};
  return keys;
}

namespace {

std::vector<std::size_t> select(const std::string& selector) {
  const auto& keys = acceptance_keys();
  if (selector == "all") {
    std::vector<std::size_t> out(keys.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (selector == keys[i] || selector == std::to_string(i + 1)) return {i};
  return {};
}

}  // namespace

bool is_acceptance_selector(const std::string& selector) { return !select(selector).empty(); }

AcceptanceReport run_acceptance(const std::string& selector, std::uint64_t seed) {
  const auto chosen = select(selector);
  if (chosen.empty()) throw std::invalid_argument("unknown verification selector \"" + selector + "\"");
  AcceptanceReport report;
  report.seed = seed;
  report.selector = selector;
  for (const std::size_t i : chosen) {
    Stopwatch clock;
    auto result = criteria()[i](seed);
    if (result.seconds == 0.0) result.seconds = clock.seconds();
    report.criteria.push_back(std::move(result));
  }
  return report;
}

Json to_json(const AcceptanceReport& report) {
  Json criteria = Json::array();
  for (const auto& c : report.criteria)
    criteria.push_back({{"id", c.id}, {"key", c.key}, {"title", c.title}, {"passed", c.passed}, {"measured", c.measured}});
  return {{"seed", report.seed}, {"selector", report.selector}, {"passed", report.passed()}, {"criteria", criteria}};
}

std::string summary_line(const CriterionResult& c) {
  std::string line = std::string(c.passed ? "[PASS] " : "[FAIL] ") + std::to_string(c.id) + " " + c.key + ": " + c.summary;
  for (const auto& w : c.warnings) line += " (warning: " + w + ")";
  return line;
}

}  // namespace volterra
