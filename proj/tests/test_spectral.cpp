#include "support.hpp"

#include "volterra/spectral.hpp"
#include "volterra/ztransform.hpp"

#include <doctest.h>

#include <cmath>

using namespace volterra;
using namespace test;

namespace {

Matrix m1(cplx a) { return Matrix::Constant(1, 1, a); }

VolterraSystem scalar_demo(double b) {
  return VolterraSystem(m1(0.5), Kernel(GeometricSumKernel{1, {{m1(b), 0.5}}}));
}

/// Roots z1, z2 and kernel ratio r: (z - a)(z - r) - b z = (z - z1)(z - z2).
VolterraSystem with_roots(cplx z1, cplx z2, cplx r) {
  const cplx a = z1 * z2 / r;
  return VolterraSystem(m1(a), Kernel(GeometricSumKernel{1, {{m1(z1 + z2 - a - r), r}}}));
}

std::vector<double> angles(const SingularSet& s) {
  std::vector<double> out;
  for (const auto& p : s.points) out.push_back(p.angle);
  return out;
}

}  // namespace

TEST_CASE("delta is zI - A - B~(z)") {
  Rng rng(31);
  const auto s = random_system(rng, 2, 1, 0.9);
  const cplx z(0.3, 0.9);
  const Matrix expected = z * Matrix::Identity(2, 2) - s.a() - zt_kernel(s.kernel(), z).value;
  CHECK((delta(s, z) - expected).norm() < 1e-14);
}

TEST_CASE("scalar demos") {
  for (const auto& sigma : {find_sigma(scalar_demo(0.25)), find_sigma_scan(scalar_demo(0.25))}) {
    REQUIRE(sigma.points.size() == 1);
    CHECK(angular_distance(sigma.points[0].angle, 0.0) < 1e-6);
    CHECK(sigma.points[0].residual <= 1e-8);
  }
  CHECK(find_sigma(scalar_demo(0.25)).method == SigmaMethod::polynomial_roots);
  CHECK(find_sigma_polynomial(scalar_demo(0.125)).points.empty());
  CHECK(find_sigma_scan(scalar_demo(0.125)).points.empty());
}

TEST_CASE("characteristic polynomial of the demo has roots 1 and 1/4") {
  const auto p = characteristic_polynomial(scalar_demo(0.25));
  REQUIRE(p);
  REQUIRE(p->size() == 3);
  // z^2 - 1.25 z + 0.25
  CHECK(std::abs((*p)[2](0, 0) - 1.0) < 1e-15);
  CHECK(std::abs((*p)[1](0, 0) + 1.25) < 1e-15);
  CHECK(std::abs((*p)[0](0, 0) - 0.25) < 1e-15);
  const Kernel t(TabulatedKernel{1, {m1(0.1)}, 0.0});
  CHECK_FALSE(characteristic_polynomial(VolterraSystem(m1(0.1), t)));
}

TEST_CASE("memoryless systems: Σ is the unimodular spectrum of A") {
  CHECK(angles(find_sigma(VolterraSystem(m1(1.0), Kernel::zero(1)))) == std::vector<double>{0.0});
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = std::polar(1.0, 0.7);
  a(1, 1) = 0.5;
  const auto sigma = find_sigma(VolterraSystem(a, Kernel::zero(2)));
  REQUIRE(sigma.points.size() == 1);
  CHECK(sigma.points[0].angle == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("polynomial and scan paths agree on constructed marginal systems") {
  Rng rng(32);
  for (int t = 0; t < 10; ++t) {
    const double phi = uniform(rng, 0.0, 6.28);
    const cplx z2 = std::polar(uniform(rng, 0.0, 0.8), uniform(rng, 0.0, 6.28));
    const auto s = with_roots(std::polar(1.0, phi), z2, std::polar(uniform(rng, 0.2, 0.8), uniform(rng, 0.0, 6.28)));
    const auto poly = angles(find_sigma_polynomial(s));
    const auto scan = angles(find_sigma_scan(s));
    REQUIRE(poly.size() == 1);
    REQUIRE(scan.size() == 1);
    CHECK(angular_distance(poly[0], phi) < 1e-8);
    CHECK(angular_distance(scan[0], phi) < 1e-6);
  }
}

TEST_CASE("tabulated kernels fall back to the scan") {
  std::vector<Matrix> values;
  for (int n = 0; n < 30; ++n) values.push_back(m1(0.25 * std::pow(0.5, n)));
  const VolterraSystem s(m1(0.5), Kernel(TabulatedKernel{1, values, 0.25 * std::pow(0.5, 30) / 0.5}));
  const auto sigma = find_sigma(s);
  CHECK(sigma.method == SigmaMethod::scan_refine);
  REQUIRE(sigma.points.size() == 1);
  CHECK(angular_distance(sigma.points[0].angle, 0.0) < 1e-6);
}

TEST_CASE("serial and parallel scans are bitwise identical") {
  Rng rng(33);
  const auto s = random_system(rng, 3, 1, 1.0);
  const auto a = scan_circle(s, 4096);
  const auto b = scan_circle_serial(s, 4096);
  REQUIRE(a.size() == b.size());
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i) same = same && a[i].angle == b[i].angle && a[i].sigma_min == b[i].sigma_min;
  CHECK(same);
}

TEST_CASE("boundedness evidence") {
  const Sequence flat = Sequence::generate(1, 1, 4096, [](std::size_t n) { return m1(std::polar(1.0, 0.3 * n)); });
  CHECK(boundedness(flat, 1e-3, 16).bounded);
  // Only exponential growth counts; polynomial growth stays below the slope bound.
  const Sequence ramp = Sequence::generate(1, 1, 4096, [](std::size_t n) { return m1(1.0 + n); });
  CHECK(boundedness(ramp, 1e-3, 16).bounded);
  const Sequence blowup = Sequence::generate(1, 1, 4096, [](std::size_t n) { return m1(std::pow(1.01, n)); });
  const auto e = boundedness(blowup, 1e-3, 16);
  CHECK_FALSE(e.bounded);
  CHECK(e.slope == doctest::Approx(std::log(1.01)).epsilon(1e-3));
}

TEST_CASE("classification of the demos") {
  ClassifyOptions o;
  o.horizon = 2048;
  const auto kt = classify(scalar_demo(0.25), o);
  CHECK(kt.verdict == Verdict::KTDifferenceConvergent);
  CHECK(kt.kt_difference_convergent);
  CHECK(kt.sigma_subset_one);
  CHECK(kt.kt_tail_difference < 1e-12);

  const auto stable = classify(scalar_demo(0.125), o);
  CHECK(stable.verdict == Verdict::AsymptoticallyStable);
  CHECK(stable.sigma_empty);

  const auto unstable = classify(VolterraSystem(m1(1.5), Kernel::zero(1)), o);
  CHECK(unstable.verdict == Verdict::UnstableEvidence);

  const auto rotation = classify(VolterraSystem(m1(std::polar(1.0, 0.7)), Kernel::zero(1)), o);
  CHECK(rotation.verdict != Verdict::AsymptoticallyStable);
  CHECK(rotation.verdict != Verdict::UnstableEvidence);

  o.horizon = 10;
  CHECK_THROWS_AS(classify(scalar_demo(0.25), o), std::invalid_argument);
}
