#include "volterra/gallery.hpp"

#include <cmath>

namespace volterra {

namespace {

Matrix m1(cplx a) { return Matrix::Constant(1, 1, a); }

Matrix m2(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix m3(std::initializer_list<cplx> entries) {
  Matrix m(3, 3);
  auto it = entries.begin();
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) m(i, j) = *it++;
  return m;
}

Vector vec(std::initializer_list<cplx> entries) {
  Vector v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (const cplx e : entries) v(i++) = e;
  return v;
}

Forcing geometric_decay(Vector amplitude, cplx ratio) {
  return Forcing(DecayingForcing{std::move(amplitude), DecayingForcing::Profile::geometric, ratio});
}

Forcing harmonic(double angle, Vector amplitude) {
  const Index d = amplitude.size();
  return Forcing(HarmonicForcing{d, {{angle, std::move(amplitude)}}});
}

Kernel geometric(Index d, std::vector<GeometricTerm> terms) { return Kernel(GeometricSumKernel{d, std::move(terms)}); }
Kernel finite(Index d, std::vector<Matrix> terms) { return Kernel(FiniteKernel{d, std::move(terms)}); }

std::vector<GalleryEntry> build() {
  const cplx i(0.0, 1.0);
  std::vector<GalleryEntry> g;

  g.push_back({"scalar-geometric", VolterraSystem(m1(0.3), geometric(1, {{m1(0.2), 0.5}})),
               geometric_decay(vec({0.5}), 0.9), harmonic(1.3, vec({0.4})), vec({1.0})});

  g.push_back({"scalar-complex-finite",
               VolterraSystem(m1({-0.4, 0.2}), finite(1, {m1(0.1), m1(0.1 * i), m1(-0.05)})),
               geometric_decay(vec({{0.2, 0.1}}), {0.6, 0.3}), harmonic(2.5, vec({{0.3, -0.2}})), vec({{1.0, 1.0}})});

  g.push_back({"scalar-memoryless", VolterraSystem(m1(0.6), Kernel::zero(1)),
               Forcing(DecayingForcing{vec({1e-7}), DecayingForcing::Profile::inverse, 0.5}), harmonic(0.4, vec({1.0})),
               vec({-1.0})});

  g.push_back({"triangular-geometric",
               VolterraSystem(m2(0.3, 0.1, 0.0, 0.4), geometric(2, {{0.1 * Matrix::Identity(2, 2), 0.6}})),
               geometric_decay(vec({0.5, -0.5}), 0.8), harmonic(4.0, vec({0.2, 0.1 * i})), vec({1.0, 0.0})});

  const double c = std::cos(0.7), s = std::sin(0.7);
  g.push_back({"rotation-finite",
               VolterraSystem(0.5 * m2(c, -s, s, c), finite(2, {0.1 * m2(0.0, 1.0, 1.0, 0.0), 0.05 * Matrix::Identity(2, 2)})),
               geometric_decay(vec({1.0, 1.0}), 0.9 * i), harmonic(5.5, vec({0.3, 0.3})), vec({0.0, 1.0})});

  g.push_back({"diagonal-two-ratios",
               VolterraSystem(m3({0.2, 0.0, 0.05, 0.0, 0.3 * i, 0.0, 0.0, 0.0, -0.25}),
                              geometric(3, {{0.1 * Matrix::Identity(3, 3), 0.3},
                                            {Matrix::Constant(3, 3, 0.02), -0.5}})),
               geometric_decay(vec({0.3, 0.0, -0.3}), -0.7), harmonic(3.0, vec({0.1, 0.2, 0.3})), vec({1.0, 1.0, 1.0})});

  g.push_back({"scalar-slow-memory", VolterraSystem(m1(0.5 * i), geometric(1, {{m1(0.05), 0.8}})),
               geometric_decay(vec({1.0}), 0.95), harmonic(0.9, vec({0.5})), vec({1.0})});

  {
    const Matrix shape = m2(0.5, 0.5, 0.0, 0.5);
    std::vector<Matrix> values;
    for (int n = 0; n < 20; ++n) values.push_back(0.1 * std::pow(0.5, n) * shape);
    const double tail = 0.1 * operator_norm(shape) * std::pow(0.5, 20) / 0.5;
    g.push_back({"tabulated-2x2",
                 VolterraSystem(0.4 * Matrix::Identity(2, 2), Kernel(TabulatedKernel{2, std::move(values), tail})),
                 geometric_decay(vec({0.2, 0.2}), 0.5), harmonic(1.9, vec({0.5, 0.0})), vec({1.0, -1.0})});
  }

  g.push_back({"scalar-alternating", VolterraSystem(m1(-0.7), finite(1, {m1(0.1)})), geometric_decay(vec({1.0}), 0.7),
               harmonic(3.1, vec({0.2})), vec({0.5})});

  g.push_back({"full-3x3-finite",
               VolterraSystem(0.25 * m3({0.5, 0.3 * i, 0.0, 0.2, -0.4, 0.1, 0.0, 0.3, 0.6 * i}),
                              finite(3, {0.1 * m3({0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0}),
                                         0.05 * i * Matrix::Identity(3, 3), Matrix::Constant(3, 3, 0.03)})),
               geometric_decay(vec({1.0, 0.0, 0.0}), {0.5, 0.5}), harmonic(2.2, vec({0.0, 0.3, 0.3 * i})),
               vec({0.0, 0.0, 1.0})});
  return g;
}

}  // namespace

const std::vector<GalleryEntry>& gallery() {
  static const std::vector<GalleryEntry> entries = build();
  return entries;
}

Scenario gallery_scenario(const GalleryEntry& entry, const Forcing& forcing, std::size_t horizon) {
  return Scenario{entry.name, entry.system, forcing, entry.x0, horizon, {}, {}};
}

Forcing unit_constant_forcing(Index dim) { return Forcing(ConstantForcing{Vector::Ones(dim)}); }

}  // namespace volterra
