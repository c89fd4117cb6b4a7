#include "support.hpp"

#include "volterra/solver.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>

using namespace volterra;
using namespace test;

namespace {

Matrix m1(cplx a) { return Matrix::Constant(1, 1, a); }

VolterraSystem scalar_demo(double b) {
  return VolterraSystem(m1(0.5), Kernel(GeometricSumKernel{1, {{m1(b), 0.5}}}));
}

}  // namespace

TEST_CASE("scalar demo: hand-computed first steps") {
  Vector x0(1);
  x0 << 1.0;
  const auto x = solve(scalar_demo(0.25), Forcing::zero(1), x0, 3);
  REQUIRE(x.size() == 4);
  CHECK(std::abs(x[1](0, 0) - 0.75) < 1e-15);
  CHECK(std::abs(x[2](0, 0) - 0.6875) < 1e-15);
  // x3 = 0.5 x2 + 0.25 (0.25 x0 + 0.5 x1 + x2)
  CHECK(std::abs(x[3](0, 0) - (0.5 * 0.6875 + 0.25 * (0.25 + 0.375 + 0.6875))) < 1e-15);
}

TEST_CASE("resolvent matches the partial-fraction closed form") {
  const auto X = resolvent(scalar_demo(0.25), 100);
  for (std::size_t n = 0; n <= 100; ++n)
    CHECK(std::abs(X[n](0, 0) - (2.0 / 3.0 + std::pow(0.25, static_cast<double>(n)) / 3.0)) < 1e-12);
}

TEST_CASE("stable demo resolvent follows the dominant root") {
  const auto X = resolvent(scalar_demo(0.125), 100);
  const double disc = std::sqrt(1.125 * 1.125 - 1.0);
  const double z1 = 0.5 * (1.125 + disc), z2 = 0.5 * (1.125 - disc);
  const double alpha = (0.625 - z2) / (z1 - z2);
  for (std::size_t n : {10u, 50u, 100u}) {
    const double oracle = alpha * std::pow(z1, n) + (1.0 - alpha) * std::pow(z2, n);
    CHECK(std::abs(X[n](0, 0).real() - oracle) <= 1e-12 * std::max(1.0, oracle) + 1e-15);
  }
}

TEST_CASE("memoryless system is a matrix power") {
  const VolterraSystem s(m1(0.5), Kernel::zero(1));
  Vector x0(1);
  x0 << 1.0;
  const auto x = solve(s, Forcing::zero(1), x0, 10);
  CHECK(x[10](0, 0) == cplx(std::pow(0.5, 10)));
}

TEST_CASE("solutions satisfy the recursion and the resolvent representation") {
  Rng rng(11);
  for (int kind = 0; kind < 3; ++kind)
    for (Index d = 1; d <= 3; ++d) {
      const auto s = random_system(rng, d, kind, 0.9);
      const Vector x0 = random_vector(rng, d);
      const Forcing y(HarmonicForcing{d, {{1.1, random_vector(rng, d)}}});
      CHECK(recursion_residual(s, y, solve(s, y, x0, 300)) < 1e-13);
      CHECK(representation_check(s, x0, 300) < 1e-12);
    }
}

TEST_CASE("variation of constants: x(n) = X(n) x0 + sum X(n-1-k) y(k)") {
  Rng rng(12);
  const auto s = random_system(rng, 2, 1, 0.8);
  const Vector x0 = random_vector(rng, 2);
  const Forcing y(HarmonicForcing{2, {{0.4, random_vector(rng, 2)}}});
  const std::size_t n = 60;
  const auto x = solve(s, y, x0, n);
  const auto X = resolvent(s, n);
  Vector expected = X[n] * x0;
  for (std::size_t k = 0; k < n; ++k) expected += X[n - 1 - k] * forcing_eval(y, k);
  CHECK((Vector(x[n]) - expected).norm() < 1e-12 * (1.0 + expected.norm()));
}

TEST_CASE("fast solver agrees with the direct recursion") {
  Rng rng(13);
  for (std::size_t n : {0u, 1u, 5u, 63u, 64u, 65u, 200u, 1000u, 2049u}) {
    const int kind = static_cast<int>(n % 3);
    const Index d = 1 + static_cast<Index>(n % 2);
    const auto s = random_system(rng, d, kind, 0.95);
    const Vector x0 = random_vector(rng, d);
    const Forcing y(ConstantForcing{random_vector(rng, d)});
    const auto slow = solve(s, y, x0, n);
    const auto fast = solve_fast(s, y, x0, n);
    REQUIRE(fast.size() == n + 1);
    CHECK(max_difference(slow, fast) <= 1e-10 * std::max(1.0, slow.sup_norm()));
  }
}

TEST_CASE("fast resolvent agrees with the direct resolvent") {
  Rng rng(14);
  const auto s = random_system(rng, 2, 1, 0.9);
  CHECK(max_difference(resolvent(s, 700), resolvent_fast(s, 700)) < 1e-10);
  CHECK(max_difference(resolvent(scalar_demo(0.25), 3000), resolvent_fast(scalar_demo(0.25), 3000)) < 1e-10);
}

TEST_CASE("fast solver output does not depend on the thread count") {
  Rng rng(15);
  const auto s = random_system(rng, 3, 1, 0.9);
  const Vector x0 = random_vector(rng, 3);
  const Forcing y(HarmonicForcing{3, {{2.0, random_vector(rng, 3)}}});
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = solve_fast(s, y, x0, 5000);
  omp_set_num_threads(4);
  const auto four = solve_fast(s, y, x0, 5000);
  omp_set_num_threads(saved);
  const auto a = one.data(), b = four.data();
  CHECK(std::equal(a.begin(), a.end(), b.begin()));
}

TEST_CASE("difference recursion matches subtraction and the extended path") {
  const auto s = scalar_demo(0.25);
  const auto X = resolvent(s, 40);
  const auto D = resolvent_differences(s, 40);
  for (std::size_t n = 0; n < 40; ++n) CHECK(std::abs(D[n](0, 0) - (X[n + 1](0, 0) - X[n](0, 0))) < 1e-14);
  const auto E = resolvent_differences_extended(s, 201);
  for (std::size_t n : {0u, 20u, 150u, 200u}) {
    const double oracle = -std::pow(0.25, static_cast<double>(n)) / 4.0;
    CHECK(std::abs(E[n](0, 0).real() / oracle - 1.0) < 1e-12);
  }
}

TEST_CASE("overflow reports the first non-finite step") {
  const VolterraSystem s(m1(1e300), Kernel::zero(1));
  Vector x0(1);
  x0 << 1.0;
  try {
    solve(s, Forcing::zero(1), x0, 10);
    FAIL("no overflow raised");
  } catch (const OverflowError& e) {
    CHECK(e.step() == 2);
  }
  CHECK_THROWS_AS(solve_fast(s, Forcing::zero(1), x0, 10), OverflowError);
}

TEST_CASE("dimension mismatches are rejected") {
  Vector x0(2);
  x0 << 1.0, 0.0;
  CHECK_THROWS_AS(solve(scalar_demo(0.25), Forcing::zero(1), x0, 3), std::invalid_argument);
  CHECK_THROWS_AS(solve(scalar_demo(0.25), Forcing::zero(2), x0.head(1), 3), std::invalid_argument);
}
