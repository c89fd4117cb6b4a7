#include "volterra/solver.hpp"

#include "march.hpp"

#include <algorithm>
#include <string>

namespace volterra {

OverflowError::OverflowError(std::size_t step)
    : std::runtime_error("non-finite state at step " + std::to_string(step)), step_(step) {}

namespace {

void require_dims(const VolterraSystem& system, const Forcing& forcing, const Vector& x0) {
  if (forcing.dim() != system.dim())
    throw std::invalid_argument("forcing dimension " + std::to_string(forcing.dim()) + " does not match system dimension " +
                                std::to_string(system.dim()));
  if (x0.size() != system.dim())
    throw std::invalid_argument("initial vector length " + std::to_string(x0.size()) +
                                " does not match system dimension " + std::to_string(system.dim()));
}

std::vector<cplx> forcing_table(const Forcing& forcing, std::size_t steps) {
  if (forcing.is_zero()) return {};
  const auto d = static_cast<std::size_t>(forcing.dim());
  std::vector<cplx> out(steps * d);
  for (std::size_t n = 0; n < steps; ++n) {
    const Vector y = forcing_eval(forcing, n);
    std::copy(y.data(), y.data() + d, out.begin() + static_cast<std::ptrdiff_t>(n * d));
  }
  return out;
}

const cplx* ptr_or_null(const std::vector<cplx>& v) { return v.empty() ? nullptr : v.data(); }

}  // namespace

Trajectory solve(const VolterraSystem& system, const Forcing& forcing, const Vector& x0, std::size_t steps) {
  require_dims(system, forcing, x0);
  Trajectory x(system.dim(), 1, steps + 1);
  x[0] = x0;
  const auto sys = detail::flatten<cplx>(system, steps);
  const auto y = forcing_table(forcing, steps);
  detail::advance_block<cplx>(sys, 1, ptr_or_null(y), nullptr, x.data().data(), 0, steps);
  return x;
}

Trajectory solve_fast(const VolterraSystem& system, const Forcing& forcing, const Vector& x0, std::size_t steps) {
  require_dims(system, forcing, x0);
  Trajectory x(system.dim(), 1, steps + 1);
  x[0] = x0;
  const auto sys = detail::flatten<cplx>(system, steps);
  const auto y = forcing_table(forcing, steps);
  detail::march_fast(sys, 1, ptr_or_null(y), x.data().data(), steps);
  return x;
}

OperatorTrajectory resolvent(const VolterraSystem& system, std::size_t steps) {
  const Index d = system.dim();
  OperatorTrajectory X(d, d, steps + 1);
  X[0] = Matrix::Identity(d, d);
  const auto sys = detail::flatten<cplx>(system, steps);
  detail::advance_block<cplx>(sys, d, nullptr, nullptr, X.data().data(), 0, steps);
  return X;
}

OperatorTrajectory resolvent_fast(const VolterraSystem& system, std::size_t steps) {
  const Index d = system.dim();
  OperatorTrajectory X(d, d, steps + 1);
  X[0] = Matrix::Identity(d, d);
  const auto sys = detail::flatten<cplx>(system, steps);
  detail::march_fast(sys, d, nullptr, X.data().data(), steps);
  return X;
}

OperatorTrajectory resolvent_differences(const VolterraSystem& system, std::size_t count) {
  if (count == 0) throw std::invalid_argument("difference count must be positive");
  const Index d = system.dim();
  const auto flat = detail::difference_recursion<cplx>(system, count);
  OperatorTrajectory D(d, d, count);
  std::copy(flat.begin(), flat.end(), D.data().begin());
  return D;
}

Sequence convolve(const Kernel& kernel, const Sequence& x) {
  if (x.rows() != kernel.dim()) throw std::invalid_argument("kernel dimension does not match sequence elements");
  const auto table = kernel_table(kernel, x.size());
  Sequence out(x.rows(), x.cols(), x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    Matrix s = Matrix::Zero(x.rows(), x.cols());
    for (std::size_t k = 0; k <= n; ++k) s.noalias() += table[k] * x[n - k];
    out[n] = s;
  }
  return out;
}

Sequence apply_V(const VolterraSystem& system, const Sequence& x) {
  if (x.rows() != system.dim()) throw std::invalid_argument("system dimension does not match sequence elements");
  Sequence out = convolve(system.kernel(), x);
  for (std::size_t n = 0; n < x.size(); ++n) out[n] += system.a() * x[n];
  return out;
}

double representation_check(const VolterraSystem& system, const Vector& x0, std::size_t steps) {
  const auto x = solve(system, Forcing::zero(system.dim()), x0, steps);
  const auto X = resolvent(system, steps);
  double worst = 0.0;
  for (std::size_t n = 0; n <= steps; ++n) worst = std::max(worst, (x[n] - X[n] * x0).norm());
  return worst;
}

double recursion_residual(const VolterraSystem& system, const Forcing& forcing, const Sequence& states) {
  if (states.rows() != system.dim()) throw std::invalid_argument("system dimension does not match states");
  if (!forcing.is_zero() && states.cols() != 1)
    throw std::invalid_argument("a nonzero forcing applies to vector trajectories only");
  if (states.size() < 2) return 0.0;
  const std::size_t steps = states.size() - 1;
  const auto table = kernel_table(system.kernel(), steps);
  double worst = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    Matrix r = states[n + 1] - system.a() * states[n];
    for (std::size_t k = 0; k <= n; ++k) r.noalias() -= table[n - k] * states[k];
    if (!forcing.is_zero()) r -= forcing_eval(forcing, n);
    worst = std::max(worst, operator_norm(r));
  }
  return worst / (1.0 + states.sup_norm());
}

}  // namespace volterra
