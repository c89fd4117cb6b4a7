#include "support.hpp"

#include "volterra/seqspec.hpp"

#include <doctest.h>

#include <cmath>

using namespace volterra;
using namespace test;

namespace {

Matrix m1(cplx a) { return Matrix::Constant(1, 1, a); }

Sequence harmonic(double theta, std::size_t len) {
  return Sequence::generate(1, 1, len, [&](std::size_t n) { return m1(std::polar(1.0, theta * n)); });
}

Sequence inverse(std::size_t len) {
  return Sequence::generate(1, 1, len, [](std::size_t n) { return m1(n == 0 ? 0.0 : 1.0 / n); });
}

}  // namespace

TEST_CASE("quotient norm is the window maximum") {
  const Sequence x = Sequence::generate(1, 1, 10, [](std::size_t n) { return m1(10.0 - n); });
  const auto q = quotient_norm(x, 3, 6);
  CHECK(q.value == 7.0);
  CHECK(q.window_start == 3);
  CHECK(q.window_end == 6);
  CHECK_THROWS(quotient_norm(x, 5, 20));
}

TEST_CASE("shift resolvent of constants and harmonics") {
  const cplx lambda = std::polar(1.5, 0.4);
  const Sequence c = Sequence::generate(1, 1, 400, [](std::size_t) { return m1(2.0); });
  const auto rc = resolvent_S(c, lambda, 0, 100, 2.0);
  for (std::size_t k = 0; k <= 100; k += 25)
    CHECK(std::abs(rc.values[k](0, 0) - 2.0 / (lambda - 1.0)) <= rc.truncation_bound + 1e-14);

  const double theta = 2.2;
  const auto h = harmonic(theta, 400);
  const auto rh = resolvent_S(h, lambda, 10, 50, 1.0);
  for (std::size_t k = 10; k <= 50; k += 10)
    CHECK(std::abs(rh.values[k - 10](0, 0) - std::polar(1.0, theta * k) / (lambda - std::polar(1.0, theta))) <=
          rh.truncation_bound + 1e-14);
  CHECK_THROWS(resolvent_S(h, 0.9, 0, 10));
}

TEST_CASE("(λ - S) R(λ,S) x = x on random sequences") {
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const auto x = random_sequence(rng, 2, 600);
    const cplx lambda = std::polar(uniform(rng, 1.05, 2.0), uniform(rng, 0.0, 6.28));
    const auto r = resolvent_S(x, lambda, 0, 200);
    for (std::size_t k = 0; k < 200; k += 7) {
      const Vector lhs = lambda * r.values[k] - r.values[k + 1];
      CHECK((lhs - Vector(x[k])).norm() <= 2.0 * (std::abs(lambda) + 1.0) * r.truncation_bound + 1e-12);
    }
  }
}

TEST_CASE("Abel limits") {
  const auto h = harmonic(1.0, 4000);
  const auto at = abel_test(h, 1.0);
  CHECK_FALSE(at.passed);
  CHECK(at.limit == doctest::Approx(1.0).epsilon(0.05));
  const auto off = abel_test(h, 2.5);
  CHECK(off.passed);
  const Sequence decay = Sequence::generate(1, 1, 4000, [](std::size_t n) { return m1(std::pow(0.99, n)); });
  CHECK(abel_test(decay, 0.0).passed);
}

TEST_CASE("required length covers the longest resolvent window") {
  const SpectrumOptions o;
  const std::size_t len = required_length(o);
  CHECK(len > 19000);
  CHECK(len <= 20000);
  CHECK_THROWS(estimate_spectrum(harmonic(1.0, 1000), o));
}

TEST_CASE("spectrum of a harmonic is its frequency; 1/n has empty spectrum") {
  const SpectrumOptions o;
  const auto spec = estimate_spectrum(harmonic(1.0, 20000), o);
  REQUIRE_FALSE(spec.detected.empty());
  for (const double a : spec.detected) CHECK(angular_distance(a, 1.0) < 1e-2);

  const auto empty = estimate_spectrum(inverse(20000), o);
  CHECK(empty.detected.empty());
  CHECK(*std::max_element(empty.scores.begin(), empty.scores.end()) < 0.5);
}

TEST_CASE("serial and parallel spectrum estimates are bitwise identical") {
  Rng rng(42);
  const Sequence x = Sequence::generate(2, 1, 20000, [&](std::size_t n) {
    Vector v(2);
    v << std::polar(1.0, 0.3 * n), std::pow(0.999, n) * std::polar(1.0, 2.0 * n);
    return v;
  });
  SpectrumOptions o;
  o.grid = 256;
  const auto a = estimate_spectrum(x, o);
  const auto b = estimate_spectrum_serial(x, o);
  CHECK(a.scores == b.scores);
  CHECK(a.detected == b.detected);
}

TEST_CASE("Z-spectrum of 1/n contains 0") {
  const auto z = estimate_z_spectrum(inverse(20000));
  REQUIRE_FALSE(z.detected.empty());
  CHECK(std::any_of(z.detected.begin(), z.detected.end(), [](double a) { return angular_distance(a, 0.0) < 1e-2; }));
  for (const double a : z.detected) CHECK(angular_distance(a, 0.0) < 0.1);
}

TEST_CASE("removing an almost periodic part empties the spectrum") {
  const Sequence x = Sequence::generate(1, 1, 20000, [](std::size_t n) {
    return m1(std::polar(0.7, 1.3 * n) + std::pow(0.9, n));
  });
  const SpectrumOptions o;
  CHECK_FALSE(estimate_spectrum(x, o).detected.empty());
  CHECK(estimate_spectrum_modulo_aap(x, {1.3}, o).detected.empty());
}

TEST_CASE("inclusion checks") {
  CHECK(check_inclusion({0.1, 6.28}, {0.0}, 0.11).holds);
  const auto r = check_inclusion({0.1, 3.0}, {0.0}, 0.11);
  CHECK_FALSE(r.holds);
  CHECK(r.worst_angle == 3.0);
  CHECK(check_inclusion({}, {}, 0.1).holds);
  CHECK_FALSE(check_inclusion({1.0}, {}, 0.1).holds);
}
