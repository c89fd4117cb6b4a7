#include "volterra/solver.hpp"

#include "march.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

namespace volterra {

OperatorTrajectory resolvent_differences_extended(const VolterraSystem& system, std::size_t count) {
  using Extended = boost::multiprecision::cpp_complex_100;
  if (count == 0) throw std::invalid_argument("difference count must be positive");
  const Index d = system.dim();
  const auto flat = detail::difference_recursion<Extended>(system, count);
  OperatorTrajectory D(d, d, count);
  auto out = D.data();
  for (std::size_t e = 0; e < flat.size(); ++e)
    out[e] = cplx(static_cast<double>(flat[e].real()), static_cast<double>(flat[e].imag()));
  return D;
}

}  // namespace volterra
