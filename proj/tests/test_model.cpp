#include "volterra/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace volterra;

namespace {

Matrix m1(cplx a) { return Matrix::Constant(1, 1, a); }

}  // namespace

TEST_CASE("geometric kernel values are C r^n") {
  const cplx r(0.3, 0.4);
  const Kernel k(GeometricSumKernel{1, {{m1(2.0), r}, {m1(-1.0), 0.5}}});
  for (std::size_t n = 0; n < 30; ++n) {
    const cplx expected = 2.0 * std::pow(r, static_cast<double>(n)) - std::pow(0.5, static_cast<double>(n));
    CHECK(std::abs(kernel_eval(k, n)(0, 0) - expected) < 1e-14);
  }
  CHECK(kernel_norm_sum(k) == doctest::Approx(2.0 / (1.0 - 0.5) + 1.0 / (1.0 - 0.5)));
}

TEST_CASE("finite and tabulated kernels past their tables") {
  const Kernel f(FiniteKernel{1, {m1(1.0), m1(2.0)}});
  CHECK(kernel_eval(f, 1)(0, 0) == cplx(2.0));
  CHECK(kernel_eval(f, 5)(0, 0) == cplx(0.0));
  CHECK(kernel_eval(f, 5, EvalMode::strict)(0, 0) == cplx(0.0));

  const Kernel t(TabulatedKernel{1, {m1(0.5)}, 0.1});
  CHECK(kernel_eval(t, 3)(0, 0) == cplx(0.0));
  CHECK_THROWS_AS(kernel_eval(t, 3, EvalMode::strict), TailAccessError);
  CHECK(kernel_norm_sum(t) == doctest::Approx(0.6));
}

TEST_CASE("kernel validation") {
  CHECK_THROWS(Kernel(GeometricSumKernel{1, {{m1(1.0), 1.0}}}));
  CHECK_THROWS(Kernel(GeometricSumKernel{1, {{m1(1.0), cplx(0.0, 1.2)}}}));
  CHECK_THROWS(Kernel(TabulatedKernel{1, {m1(1.0)}, -1.0}));
  CHECK_THROWS(Kernel(FiniteKernel{2, {m1(1.0)}}));
  CHECK_THROWS(VolterraSystem(Matrix::Identity(2, 2), Kernel::zero(1)));
}

TEST_CASE("tabulating a kernel keeps an honest tail bound") {
  const Kernel k(GeometricSumKernel{1, {{m1(0.3), 0.8}}});
  const Kernel t = tabulate(k, 20);
  const auto& tab = std::get<TabulatedKernel>(t.variant());
  double tail = 0.0;
  for (std::size_t n = 20; n < 2000; ++n) tail += std::abs(kernel_eval(k, n)(0, 0));
  CHECK(tab.tail_norm_bound >= tail * (1.0 - 1e-12));
  CHECK(tab.tail_norm_bound <= tail * 1.01);
  for (std::size_t n = 0; n < 20; ++n) CHECK(std::abs(kernel_eval(t, n)(0, 0) - kernel_eval(k, n)(0, 0)) < 1e-15);
}

TEST_CASE("contraction slack") {
  const VolterraSystem s(m1(0.3), Kernel(GeometricSumKernel{1, {{m1(0.2), 0.5}}}));
  const auto c = contraction_check(s);
  CHECK(c.holds);
  CHECK(c.slack == doctest::Approx(1.0 - 0.3 - 0.4));
  const VolterraSystem u(m1(0.9), Kernel(FiniteKernel{1, {m1(0.2)}}));
  CHECK_FALSE(contraction_check(u).holds);
}

TEST_CASE("forcing evaluation") {
  Vector v(2);
  v << 1.0, cplx(0.0, 2.0);
  const Forcing h(HarmonicForcing{2, {{0.7, v}}});
  const Vector y = forcing_eval(h, 5);
  CHECK((y - std::polar(1.0, 3.5) * v).norm() < 1e-14);
  CHECK(h.frequencies() == std::vector<double>{0.7});

  const Forcing inv(DecayingForcing{v, DecayingForcing::Profile::inverse, 0.5});
  CHECK((forcing_eval(inv, 3) - v / 4.0).norm() < 1e-15);
  const Forcing geo(DecayingForcing{v, DecayingForcing::Profile::geometric, cplx(0.0, 0.5)});
  CHECK((forcing_eval(geo, 2) - (-0.25) * v).norm() < 1e-15);

  const Forcing c(ConstantForcing{v});
  CHECK(c.frequencies() == std::vector<double>{0.0});
  CHECK(Forcing::zero(2).frequencies().empty());
  const Forcing tab(TabulatedForcing{2, {v}});
  CHECK(forcing_eval(tab, 1).norm() == 0.0);
}

TEST_CASE("value equality") {
  const Kernel a(GeometricSumKernel{1, {{m1(0.2), 0.5}}});
  const Kernel b(GeometricSumKernel{1, {{m1(0.2), 0.5}}});
  const Kernel c(GeometricSumKernel{1, {{m1(0.2), 0.4}}});
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(VolterraSystem(m1(0.1), a) == VolterraSystem(m1(0.1), b));
}
