#include "volterra/aap.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace volterra {

namespace {

cplx phase(std::size_t n, double theta) { return std::polar(1.0, std::fmod(static_cast<double>(n) * theta, kTwoPi)); }

std::vector<double> window_maxima(const Sequence& x, std::size_t windows) {
  if (windows == 0) throw std::invalid_argument("at least one window is needed");
  if (x.size() < windows)
    throw std::invalid_argument("horizon of " + std::to_string(x.size()) + " values is shorter than " +
                                std::to_string(windows) + " windows");
  std::vector<double> out;
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t lo = x.size() * w / windows;
    const std::size_t hi = x.size() * (w + 1) / windows;
    double m = 0.0;
    for (std::size_t n = lo; n < hi; ++n) m = std::max(m, x.norm_at(n));
    out.push_back(m);
  }
  return out;
}

void reject_close(std::vector<double> frequencies, std::size_t horizon) {
  if (frequencies.size() < 2) return;
  for (auto& f : frequencies) f = wrap_angle(f);
  std::sort(frequencies.begin(), frequencies.end());
  const double gap = kTwoPi / static_cast<double>(horizon);
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    const double a = frequencies[i];
    const double b = frequencies[(i + 1) % frequencies.size()];
    if (angular_distance(a, b) < gap)
      throw std::invalid_argument("frequencies " + std::to_string(a) + " and " + std::to_string(b) +
                                  " are closer than 2π/N and cannot be separated");
  }
}

/// Least-squares amplitudes of e^{inθ_j} over n in [begin, begin + count).
std::vector<Matrix> fit_amplitudes(const Sequence& x, const std::vector<double>& freqs, std::size_t begin,
                                   std::size_t count) {
  const auto k = static_cast<Index>(freqs.size());
  const Index es = x.element_size();
  Matrix gram = Matrix::Zero(k, k);
  Matrix rhs = Matrix::Zero(k, es);
  const double inv = 1.0 / static_cast<double>(count);
  for (Index j = 0; j < k; ++j) {
    for (Index l = 0; l < k; ++l) {
      cplx s = 0.0;
      const double d = freqs[static_cast<std::size_t>(l)] - freqs[static_cast<std::size_t>(j)];
      for (std::size_t n = begin; n < begin + count; ++n) s += phase(n, d);
      gram(j, l) = s * inv;
    }
    const Matrix b = bohr_coefficient(x, freqs[static_cast<std::size_t>(j)], count, begin);
    rhs.row(j) = Eigen::Map<const Eigen::RowVectorXcd>(b.data(), es);
  }
  const Matrix sol = gram.colPivHouseholderQr().solve(rhs);
  std::vector<Matrix> out;
  for (Index j = 0; j < k; ++j) {
    Matrix a(x.rows(), x.cols());
    Eigen::Map<Eigen::RowVectorXcd>(a.data(), es) = sol.row(j);
    out.push_back(a);
  }
  return out;
}

Sequence subtract(const Sequence& x, const std::vector<double>& freqs, const std::vector<Matrix>& amps) {
  Sequence out = x;
  for (std::size_t n = 0; n < x.size(); ++n)
    for (std::size_t j = 0; j < freqs.size(); ++j) out[n] -= amps[j] * phase(n, freqs[j]);
  return out;
}

double snap(double theta) {
  theta = wrap_angle(theta);
  return kTwoPi - theta < 1e-12 ? 0.0 : theta;
}

}  // namespace

C0Result c0_test(const Sequence& x, double tol, std::size_t windows) {
  C0Result out;
  out.profile = window_maxima(x, windows);
  bool reached = false;
  out.passed = true;
  for (std::size_t i = 0; i < out.profile.size(); ++i) {
    const double p = out.profile[i];
    if (reached) {
      if (p > tol) out.passed = false;
    } else if (p <= tol) {
      reached = true;
    } else if (i > 0 && !(p < out.profile[i - 1])) {
      out.passed = false;
    }
  }
  out.passed = out.passed && reached;
  return out;
}

C0Result kt_difference_test(const Sequence& X, double tol, std::size_t windows) {
  if (X.size() < 2) throw std::invalid_argument("difference test needs at least two values");
  return c0_test(differences(X), tol, windows);
}

Matrix bohr_coefficient(const Sequence& x, double theta, std::size_t count, std::size_t offset) {
  if (count == 0) throw std::invalid_argument("Bohr means need at least one term");
  if (offset + count > x.size()) throw std::out_of_range("Bohr mean window exceeds the stored sequence");
  Matrix s = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t n = offset; n < offset + count; ++n) s += x[n] * std::conj(phase(n, theta));
  return s / static_cast<double>(count);
}

AAPDecomposition aap_decompose(const Sequence& x, const std::vector<double>& frequencies, const AapOptions& options) {
  if (x.size() < 2) throw std::invalid_argument("decomposition needs at least two values");
  reject_close(frequencies, x.size());
  AAPDecomposition out;
  for (const double f : frequencies) out.frequencies.push_back(snap(f));
  const std::size_t begin = x.size() / 2;
  if (!out.frequencies.empty()) out.coefficients = fit_amplitudes(x, out.frequencies, begin, x.size() - begin);
  const Sequence remainder = subtract(x, out.frequencies, out.coefficients);
  out.remainder_profile = window_maxima(remainder, options.windows);
  const double sup = x.sup_norm();
  out.is_aap = sup == 0.0 || out.remainder_profile.back() <= options.tol * sup;
  return out;
}

Sequence remove_frequencies(const Sequence& x, const std::vector<double>& frequencies) {
  if (frequencies.empty()) return x;
  if (x.size() < 2) throw std::invalid_argument("frequency removal needs at least two values");
  reject_close(frequencies, x.size());
  const std::size_t begin = x.size() / 2;
  return subtract(x, frequencies, fit_amplitudes(x, frequencies, begin, x.size() - begin));
}

std::vector<double> detect_frequencies(const Sequence& x, const FrequencyOptions& options) {
  if (x.size() < 8) throw std::invalid_argument("frequency detection needs at least eight values");
  const std::size_t begin = x.size() / 2;
  const std::size_t len = x.size() - begin;
  const auto es = static_cast<std::size_t>(x.element_size());
  const Sequence late = x.slice(begin, x.size());
  const double floor = options.threshold * late.sup_norm();
  if (floor == 0.0) return {};

  std::vector<double> hann(len);
  double weight = 0.0;
  for (std::size_t n = 0; n < len; ++n) {
    hann[n] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(n) / static_cast<double>(len - 1));
    weight += hann[n];
  }
  const std::size_t padded = std::bit_ceil(4 * len);
  Eigen::FFT<double> fft;

  std::vector<double> found;
  Sequence residual = late;
  // Windowed spectral energy of the residual at θ, phase referenced to n = begin.
  auto energy = [&](double theta) {
    double e2 = 0.0;
    for (std::size_t e = 0; e < es; ++e) {
      cplx s = 0.0;
      for (std::size_t n = 0; n < len; ++n) s += hann[n] * residual.data()[n * es + e] * std::conj(phase(n, theta));
      e2 += std::norm(s);
    }
    return e2;
  };

  while (found.size() < options.max_frequencies) {
    std::vector<double> power(padded, 0.0);
    std::vector<cplx> buffer(padded), spectrum;
    for (std::size_t e = 0; e < es; ++e) {
      std::fill(buffer.begin(), buffer.end(), cplx{0.0, 0.0});
      for (std::size_t n = 0; n < len; ++n) buffer[n] = hann[n] * residual.data()[n * es + e];
      fft.fwd(spectrum, buffer);
      for (std::size_t j = 0; j < padded; ++j) power[j] += std::norm(spectrum[j]);
    }
    const auto peak = static_cast<std::size_t>(std::max_element(power.begin(), power.end()) - power.begin());
    const double bin = kTwoPi / static_cast<double>(padded);
    const double center = bin * static_cast<double>(peak);

    // Golden-section maximization of the windowed energy within one bin.
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = center - bin, b = center + bin;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = energy(c), fd = energy(d);
    while (b - a > 1e-12) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = energy(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = energy(d);
      }
    }
    const double theta = snap(fc >= fd ? c : d);
    const double amplitude = std::sqrt(std::max(fc, fd)) / weight;
    if (amplitude < floor) break;
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](double f) {
      return angular_distance(f, theta) < kTwoPi / static_cast<double>(len);
    });
    if (duplicate) break;
    found.push_back(theta);

    // Refit every frequency found so far on the late window (phases referenced
    // to absolute n) and recompute the residual.
    const auto amps = fit_amplitudes(x, found, begin, len);
    for (std::size_t n = 0; n < len; ++n) {
      Matrix r = x[begin + n];
      for (std::size_t j = 0; j < found.size(); ++j) r -= amps[j] * phase(begin + n, found[j]);
      residual[n] = r;
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace volterra
