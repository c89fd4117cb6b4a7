#include "support.hpp"

#include "volterra/solver.hpp"
#include "volterra/spectral.hpp"
#include "volterra/ztransform.hpp"

#include <doctest.h>

#include <cmath>

using namespace volterra;
using namespace test;

namespace {

Matrix m1(cplx a) { return Matrix::Constant(1, 1, a); }

}  // namespace

TEST_CASE("geometric kernel transform equals its power series outside the disk") {
  const Kernel k(GeometricSumKernel{1, {{m1(0.3), cplx(0.2, 0.5)}, {m1(cplx(0.0, -0.1)), -0.7}}});
  for (const cplx z : {cplx(2.0, 0.0), cplx(0.0, 1.3), std::polar(1.05, 2.0)}) {
    cplx series = 0.0;
    for (std::size_t n = 0; n < 4000; ++n) series += kernel_eval(k, n)(0, 0) * std::pow(z, -static_cast<double>(n));
    const auto v = zt_kernel(k, z);
    CHECK(v.truncation_bound == 0.0);
    CHECK(std::abs(v.value(0, 0) - series) < 1e-12);
  }
}

TEST_CASE("closed-form kernels continue into the disk; poles are reported") {
  const Kernel k(GeometricSumKernel{1, {{m1(0.4), 0.5}}});
  const cplx z(0.2, 0.1);
  CHECK(std::abs(zt_kernel(k, z).value(0, 0) - 0.4 * z / (z - 0.5)) < 1e-15);
  CHECK_THROWS_AS(zt_kernel(k, 0.5), PoleError);
  CHECK(cauchy_riemann_defect(k, z) < 1e-6);  // O(h^2) difference error
  CHECK(cauchy_riemann_defect(k, 2.0) < 1e-7);

  const Kernel f(FiniteKernel{1, {m1(1.0), m1(2.0)}});
  CHECK(std::abs(zt_kernel(f, 0.5).value(0, 0) - 5.0) < 1e-15);
  CHECK_THROWS_AS(zt_kernel(f, 0.0), DomainError);

  const Kernel t(TabulatedKernel{1, {m1(1.0)}, 0.25});
  CHECK(zt_kernel(t, 2.0).truncation_bound == doctest::Approx(0.125));
  CHECK_THROWS_AS(zt_kernel(t, 0.5), DomainError);
}

TEST_CASE("transform of a geometric sequence lies within its truncation bound") {
  const cplx rho(0.6, 0.3);
  const Sequence x = Sequence::generate(1, 1, 50, [&](std::size_t n) { return m1(std::pow(rho, static_cast<double>(n))); });
  for (const cplx z : {cplx(1.5, 0.0), cplx(-1.2, 1.0), cplx(0.0, 3.0)}) {
    const auto v = zt_sequence(x, z, std::pow(std::abs(rho), 50.0));
    CHECK(std::abs(v.value(0, 0) - z / (z - rho)) <= v.truncation_bound + 1e-14);
  }
  CHECK_THROWS_AS(zt_sequence(x, 1.0), DomainError);
  CHECK_THROWS_AS(zt_sequence(x, cplx(0.0, 0.5)), DomainError);
}

TEST_CASE("shift, convolution and initial value rules on random data") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 1 + trial % 2;
    const auto x = random_sequence(rng, d, 1 + static_cast<std::size_t>(trial) * 3);
    const auto k = random_system(rng, d, trial % 3, 0.9).kernel();
    const cplx z = std::polar(uniform(rng, 1.1, 3.0), uniform(rng, 0.0, 6.28));
    const auto s = shift_rule_check(x, z, 0.0);
    const auto c = convolution_rule_check(k, x, z);
    const auto iv = initial_value_check(x, {10.0, 100.0, 1000.0}, std::arg(z));
    CHECK(s.holds);
    CHECK(c.holds);
    CHECK(iv.holds);
    CHECK(iv.gaps.size() == 3);
    CHECK(iv.envelopes[0] >= iv.envelopes[2]);
  }
}

TEST_CASE("initial value radii must exceed one") {
  const Sequence x = Sequence::generate(1, 1, 3, [](std::size_t) { return m1(1.0); });
  CHECK_THROWS_AS(initial_value_check(x, {0.5}), DomainError);
}

TEST_CASE("trajectory transform solves the characteristic equation") {
  // z x~(z) - z x0 = A x~(z) + B~(z) x~(z) for the homogeneous equation.
  Rng rng(22);
  const auto s = random_system(rng, 2, 1, 0.8);
  const Vector x0 = random_vector(rng, 2);
  const auto x = solve(s, Forcing::zero(2), x0, 400);
  for (const cplx z : {cplx(2.0, 0.0), cplx(0.0, -1.5)}) {
    const auto v = zt_sequence(x, z);
    const Vector oracle = delta(s, z).partialPivLu().solve(z * x0);
    CHECK((v.value - oracle).norm() < 1e-10 + v.truncation_bound * 10.0);
  }
}
