#include "support.hpp"

#include "volterra/aap.hpp"
#include "volterra/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace volterra;
using namespace test;

namespace {

Matrix m1(cplx a) { return Matrix::Constant(1, 1, a); }

}  // namespace

TEST_CASE("c0 test") {
  const Sequence decay = Sequence::generate(1, 1, 2000, [](std::size_t n) { return m1(std::pow(0.99, n)); });
  const auto d = c0_test(decay);
  CHECK(d.passed);
  CHECK(d.profile.size() == 8);
  const Sequence flat = Sequence::generate(1, 1, 2000, [](std::size_t n) { return m1(std::polar(1.0, 0.2 * n)); });
  CHECK_FALSE(c0_test(flat).passed);
  const Sequence zero = Sequence::generate(1, 1, 100, [](std::size_t) { return m1(0.0); });
  CHECK(c0_test(zero).passed);
  CHECK_THROWS(c0_test(zero, 1e-3, 0));
}

TEST_CASE("difference convergence of the demo resolvent") {
  const VolterraSystem s(m1(0.5), Kernel(GeometricSumKernel{1, {{m1(0.25), 0.5}}}));
  CHECK(kt_difference_test(resolvent(s, 400)).passed);
  CHECK_FALSE(c0_test(resolvent(s, 400)).passed);
}

TEST_CASE("Bohr coefficients pick out a mode") {
  const Sequence x = Sequence::generate(1, 1, 4096, [](std::size_t n) {
    return m1(cplx(2.0, 1.0) * std::polar(1.0, 0.9 * n) + 0.5 * std::polar(1.0, 2.4 * n));
  });
  CHECK(std::abs(bohr_coefficient(x, 0.9, 4096)(0, 0) - cplx(2.0, 1.0)) < 1e-3);
  CHECK(std::abs(bohr_coefficient(x, 2.4, 2048, 2048)(0, 0) - 0.5) < 1e-3);
  CHECK(std::abs(bohr_coefficient(x, 1.7, 4096)(0, 0)) < 5e-3);  // leakage ~ 1/N
}

TEST_CASE("decomposition of two modes plus a decaying transient") {
  const Sequence x = Sequence::generate(2, 1, 2000, [](std::size_t n) {
    Vector v(2);
    v << 1.5 * std::polar(1.0, 0.7 * n) + std::pow(0.95, n), cplx(0.0, 0.3) * std::polar(1.0, 4.0 * n);
    return v;
  });
  const auto freqs = detect_frequencies(x);
  REQUIRE(freqs.size() == 2);
  const double tol = 6.283185307179586 / 2000.0;
  CHECK(std::min(angular_distance(freqs[0], 0.7), angular_distance(freqs[1], 0.7)) < tol);
  CHECK(std::min(angular_distance(freqs[0], 4.0), angular_distance(freqs[1], 4.0)) < tol);

  const auto dec = aap_decompose(x, {0.7, 4.0});
  CHECK(dec.is_aap);
  CHECK(std::abs(dec.coefficients[0](0, 0) - 1.5) < 1e-8);
  CHECK(std::abs(dec.coefficients[1](1, 0) - cplx(0.0, 0.3)) < 1e-8);

  const auto rest = remove_frequencies(x, {0.7, 4.0});
  CHECK(rest.norm_at(1999) < 1e-8);
  CHECK(std::abs(rest[0](0, 0) - 1.0) < 1e-6);

  CHECK_FALSE(aap_decompose(x, {0.7}).is_aap);
  CHECK_THROWS(aap_decompose(x, {0.7, 0.7001}));
}

TEST_CASE("forced contraction systems are asymptotically almost periodic") {
  Rng rng(51);
  for (int t = 0; t < 5; ++t) {
    const auto s = random_system(rng, 2, t % 3, 0.85);
    const double omega = uniform(rng, 0.0, 6.28);
    const Forcing y(HarmonicForcing{2, {{omega, random_vector(rng, 2)}}});
    const auto x = solve(s, y, random_vector(rng, 2), 2000);
    const auto freqs = detect_frequencies(x);
    REQUIRE(freqs.size() == 1);
    CHECK(angular_distance(freqs[0], omega) < 6.283185307179586 / 2000.0);
    CHECK(aap_decompose(x, freqs).is_aap);
  }
}
