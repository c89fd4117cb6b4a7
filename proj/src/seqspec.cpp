#include "volterra/seqspec.hpp"

#include "volterra/aap.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace volterra {

namespace {

/// Euclidean norm of one flat element.
double flat_norm(const cplx* e, std::size_t size) {
  double s = 0.0;
  for (std::size_t i = 0; i < size; ++i) s += std::norm(e[i]);
  return std::sqrt(s);
}

/// Polynomial through (h_i, v_i) evaluated at h = 0 (Neville).
double extrapolate_to_zero(std::vector<double> h, std::vector<double> v) {
  const std::size_t n = h.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) v[i] = (h[i + m] * v[i] - h[i] * v[i + 1]) / (h[i + m] - h[i]);
  return v.front();
}

std::size_t truncation_terms(double h, double tol) {
  return static_cast<std::size_t>(std::ceil(std::log(1.0 / tol) / std::log1p(h)));
}

struct WindowPlan {
  std::size_t start;
  std::size_t end;  // inclusive
};

WindowPlan plan_window(const SpectrumOptions& o, double h) {
  const auto scaled = static_cast<std::size_t>(std::ceil(o.window_scale / h));
  const std::size_t start = std::max(o.window_start, scaled);
  return {start, start + o.window_length - 1};
}

/// Window maximum of ‖R(λ,S)x(k)‖ using every stored value past k.
double resolvent_window_max(const Sequence& x, cplx lambda, std::size_t first, std::size_t last,
                            std::size_t stop) {
  const auto es = static_cast<std::size_t>(x.element_size());
  const cplx w = 1.0 / lambda;
  std::vector<cplx> r(es, cplx{0.0, 0.0});
  const cplx* data = x.data().data();
  double best = 0.0;
  for (std::size_t k = stop; k-- > first;) {
    const cplx* xk = data + k * es;
    for (std::size_t e = 0; e < es; ++e) r[e] = (xk[e] + r[e]) * w;
    if (k <= last) best = std::max(best, flat_norm(r.data(), es));
  }
  return best;
}

double score_angle(const Sequence& x, double theta, const SpectrumOptions& o, double sup) {
  const std::size_t count = o.schedule.size();
  std::vector<double> logs_h, logs_q;
  double amplitude = 0.0;
  bool degenerate = false;
  for (const double h : o.schedule) {
    const auto plan = plan_window(o, h);
    const std::size_t stop = std::min(x.size(), plan.end + 1 + truncation_terms(h, o.truncation_tol));
    const double q = resolvent_window_max(x, std::polar(1.0 + h, theta), plan.start, plan.end, stop);
    amplitude = std::max(amplitude, h * q);
    if (!(q > 0.0)) {
      degenerate = true;
      continue;
    }
    logs_h.push_back(std::log(h));
    logs_q.push_back(std::log(q));
  }
  if (degenerate || count < 2 || amplitude < o.amplitude_floor * sup) return 0.0;
  const auto k = static_cast<double>(logs_h.size());
  double mh = 0.0, mq = 0.0;
  for (std::size_t i = 0; i < logs_h.size(); ++i) {
    mh += logs_h[i] / k;
    mq += logs_q[i] / k;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < logs_h.size(); ++i) {
    num += (logs_h[i] - mh) * (logs_q[i] - mq);
    den += (logs_h[i] - mh) * (logs_h[i] - mh);
  }
  return den > 0.0 ? -num / den : 0.0;
}

void validate(const Sequence& x, const SpectrumOptions& o) {
  if (o.grid < 16) throw std::invalid_argument("spectrum grids need at least 16 angles");
  if (o.schedule.size() < 2) throw std::invalid_argument("the s-schedule needs at least two values");
  for (std::size_t i = 0; i < o.schedule.size(); ++i)
    if (!(o.schedule[i] > 0.0) || (i > 0 && !(o.schedule[i] < o.schedule[i - 1])))
      throw std::invalid_argument("the s-schedule must list positive, strictly decreasing values of s - 1");
  if (o.window_length == 0) throw std::invalid_argument("the quotient window must be nonempty");
  const std::size_t need = required_length(o);
  if (x.size() < need)
    throw std::invalid_argument("sequence of length " + std::to_string(x.size()) + " is too short; these options need " +
                                std::to_string(need) + " values");
}

std::vector<double> grid_angles(std::size_t grid) {
  std::vector<double> out(grid);
  for (std::size_t i = 0; i < grid; ++i) out[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
  return out;
}

/// Grid indices flagged by `hit`, each widened to its two neighbours.
std::vector<double> widened(const std::vector<double>& angles, const std::vector<bool>& hit) {
  const std::size_t m = angles.size();
  std::vector<bool> keep(m, false);
  for (std::size_t i = 0; i < m; ++i)
    if (hit[i]) keep[(i + m - 1) % m] = keep[i] = keep[(i + 1) % m] = true;
  std::vector<double> out;
  for (std::size_t i = 0; i < m; ++i)
    if (keep[i]) out.push_back(angles[i]);
  return out;
}

SpectrumEstimate detect_peaks(std::vector<double> angles, std::vector<double> scores, double threshold) {
  const std::size_t m = angles.size();
  std::vector<bool> hit(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    const double g = scores[i];
    hit[i] = g >= threshold && g >= scores[(i + m - 1) % m] && g >= scores[(i + 1) % m];
  }
  SpectrumEstimate out;
  out.detected = widened(angles, hit);
  out.angles = std::move(angles);
  out.scores = std::move(scores);
  return out;
}

}  // namespace

QuotientNormEstimate quotient_norm(const Sequence& x, std::size_t k0, std::size_t k1) {
  if (k0 > k1) throw std::invalid_argument("empty quotient-norm window");
  if (k1 >= x.size())
    throw std::out_of_range("quotient-norm window ends at " + std::to_string(k1) + " but only " +
                            std::to_string(x.size()) + " values are stored");
  QuotientNormEstimate out{0.0, k0, k1};
  for (std::size_t k = k0; k <= k1; ++k) out.value = std::max(out.value, x.norm_at(k));
  return out;
}

ShiftResolvent resolvent_S(const Sequence& x, cplx lambda, std::size_t first, std::size_t last,
                           std::optional<double> tail_sup) {
  const double r = std::abs(lambda);
  if (!(r > 1.0)) throw std::domain_error("the shift resolvent needs |λ| > 1");
  if (first > last || last >= x.size()) throw std::out_of_range("shift resolvent indices outside the stored window");
  ShiftResolvent out;
  out.first = first;
  out.values = Sequence(x.rows(), x.cols(), last - first + 1);
  out.terms = x.size() - last;
  const double sup = tail_sup.value_or(x.sup_norm());
  out.truncation_bound = sup * std::pow(r, -static_cast<double>(out.terms)) / (r - 1.0);
  const cplx w = 1.0 / lambda;
  Matrix acc = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t k = x.size(); k-- > first;) {
    acc = (acc + x[k]) * w;
    if (k <= last) out.values[k - first] = acc;
  }
  return out;
}

RayLimitEstimate abel_test(const Sequence& x, double angle, const AbelOptions& options) {
  if (options.schedule.empty()) throw std::invalid_argument("the Abel schedule is empty");
  if (options.window_length == 0) throw std::invalid_argument("the Abel window must be nonempty");
  const std::size_t k0 = options.window_start;
  const std::size_t k1 = k0 + options.window_length - 1;
  if (k1 + 1 >= x.size())
    throw std::invalid_argument("Abel window [" + std::to_string(k0) + ", " + std::to_string(k1) +
                                "] leaves no resolvent terms in a sequence of length " + std::to_string(x.size()));
  RayLimitEstimate out;
  out.angle = wrap_angle(angle);
  const double sup = x.sup_norm();
  for (std::size_t i = 0; i < options.schedule.size(); ++i) {
    const double s = options.schedule[i];
    if (!(s > 1.0) || (i > 0 && !(s < options.schedule[i - 1])))
      throw std::invalid_argument("Abel schedule values must exceed 1 and decrease strictly");
    const auto res = resolvent_S(x, std::polar(s, angle), k0, k1, sup);
    double q = 0.0;
    for (std::size_t k = 0; k < res.values.size(); ++k) q = std::max(q, res.values.norm_at(k));
    out.samples.push_back({s, (s - 1.0) * (q + res.truncation_bound)});
  }
  const std::size_t used = std::min<std::size_t>(3, out.samples.size());
  std::vector<double> h, v;
  for (std::size_t i = out.samples.size() - used; i < out.samples.size(); ++i) {
    h.push_back(out.samples[i].s - 1.0);
    v.push_back(out.samples[i].estimate);
  }
  out.limit = std::abs(extrapolate_to_zero(h, v));
  out.passed = out.limit <= options.tol;
  return out;
}

std::size_t required_length(const SpectrumOptions& options) {
  std::size_t need = 0;
  for (const double h : options.schedule) {
    const auto plan = plan_window(options, h);
    need = std::max(need, plan.end + 1 + truncation_terms(h, options.truncation_tol));
  }
  return need;
}

SpectrumEstimate estimate_spectrum(const Sequence& x, const SpectrumOptions& options) {
  validate(x, options);
  auto angles = grid_angles(options.grid);
  std::vector<double> scores(options.grid);
  const double sup = x.sup_norm();
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(options.grid); ++i)
    scores[static_cast<std::size_t>(i)] = score_angle(x, angles[static_cast<std::size_t>(i)], options, sup);
  return detect_peaks(std::move(angles), std::move(scores), options.threshold);
}

SpectrumEstimate estimate_spectrum_serial(const Sequence& x, const SpectrumOptions& options) {
  validate(x, options);
  auto angles = grid_angles(options.grid);
  std::vector<double> scores(options.grid);
  const double sup = x.sup_norm();
  for (std::size_t i = 0; i < options.grid; ++i) scores[i] = score_angle(x, angles[i], options, sup);
  return detect_peaks(std::move(angles), std::move(scores), options.threshold);
}

SpectrumEstimate estimate_z_spectrum(const Sequence& x, const ZSpectrumOptions& options) {
  if (options.grid < 16) throw std::invalid_argument("spectrum grids need at least 16 angles");
  if (options.schedule.size() < 2) throw std::invalid_argument("the s-schedule needs at least two values");
  const std::size_t m = options.grid;
  const auto es = static_cast<std::size_t>(x.element_size());
  const cplx* data = x.data().data();

  // ‖x~(s e^{iθ_j})‖ on the grid: fold s^{-n} x(n) modulo m, then one FFT per element.
  auto magnitudes = [&](double s) {
    std::vector<double> sq(m, 0.0);
    Eigen::FFT<double> fft;
    std::vector<cplx> folded(m), spectrum;
    for (std::size_t e = 0; e < es; ++e) {
      std::fill(folded.begin(), folded.end(), cplx{0.0, 0.0});
      double p = 1.0;
      for (std::size_t n = 0; n < x.size(); ++n) {
        folded[n % m] += data[n * es + e] * p;
        p /= s;
      }
      fft.fwd(spectrum, folded);
      for (std::size_t j = 0; j < m; ++j) sq[j] += std::norm(spectrum[j]);
    }
    for (auto& v : sq) v = std::sqrt(v);
    return sq;
  };

  const auto first = magnitudes(1.0 + options.schedule.front());
  const auto last = magnitudes(1.0 + options.schedule.back());
  auto angles = grid_angles(m);
  std::vector<double> scores(m);
  std::vector<bool> hit(m);
  for (std::size_t j = 0; j < m; ++j) {
    scores[j] = last[j] <= 1e-300 ? 1.0 : last[j] / std::max(first[j], 1e-300);
    hit[j] = scores[j] > options.ratio_threshold;
  }
  SpectrumEstimate out;
  out.detected = widened(angles, hit);
  out.angles = std::move(angles);
  out.scores = std::move(scores);
  return out;
}

SpectrumEstimate estimate_spectrum_modulo_aap(const Sequence& x, const std::vector<double>& frequencies,
                                              const SpectrumOptions& options) {
  return estimate_spectrum(remove_frequencies(x, frequencies), options);
}

InclusionResult check_inclusion(const std::vector<double>& inner, const std::vector<double>& outer, double tol) {
  InclusionResult out;
  for (const double a : inner) {
    double best = std::numeric_limits<double>::infinity();
    for (const double b : outer) best = std::min(best, angular_distance(a, b));
    if (best > out.worst_distance) {
      out.worst_distance = best;
      out.worst_angle = a;
    }
  }
  out.holds = out.worst_distance <= tol;
  return out;
}

}  // namespace volterra
