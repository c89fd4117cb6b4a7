#pragma once

#include "volterra/model.hpp"
#include "volterra/sequence.hpp"

#include <cstddef>
#include <stdexcept>

namespace volterra {

/// x(0..N); elements are d x 1.
using Trajectory = Sequence;
/// X(0..N) with X(0) = I; elements are d x d.
using OperatorTrajectory = Sequence;

/// A state became non-finite. `step()` is the index of the first bad state.
class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(std::size_t step);
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Direct recursion, O(N^2 d^2). This is the serial reference every other path
/// is checked against.
Trajectory solve(const VolterraSystem& system, const Forcing& forcing, const Vector& x0, std::size_t steps);

/// Divide-and-conquer online convolution: solve the left half of an index
/// range, push its contribution onto the right half with one FFT block
/// product, recurse. O(N log^2 N d^3). Short horizons fall through to `solve`.
Trajectory solve_fast(const VolterraSystem& system, const Forcing& forcing, const Vector& x0, std::size_t steps);

OperatorTrajectory resolvent(const VolterraSystem& system, std::size_t steps);
OperatorTrajectory resolvent_fast(const VolterraSystem& system, std::size_t steps);

/// D(n) = X(n+1) - X(n) for n < count, computed from the recursion D itself
/// satisfies (forcing B(n+1), D(0) = A + B(0) - I) instead of subtracting
/// resolvent values. This avoids cancellation against ‖X(n)‖.
OperatorTrajectory resolvent_differences(const VolterraSystem& system, std::size_t count);

/// Same recursion carried out with 100 significant decimal digits, for
/// differences far below double resolution of the data. Results are rounded
/// to double at the end.
OperatorTrajectory resolvent_differences_extended(const VolterraSystem& system, std::size_t count);

/// (B * x)(n) = sum_{k<=n} B(k) x(n-k) over the window of x.
Sequence convolve(const Kernel& kernel, const Sequence& x);

/// (V x)(n) = A x(n) + (B * x)(n).
Sequence apply_V(const VolterraSystem& system, const Sequence& x);

/// max_{n<=N} ‖x(n) - X(n) x0‖ for the homogeneous equation.
double representation_check(const VolterraSystem& system, const Vector& x0, std::size_t steps);

/// max_n ‖x(n+1) - A x(n) - sum_k B(n-k) x(k) - y(n)‖ / (1 + sup ‖x‖).
/// Works for vector trajectories (forcing applied) and operator trajectories
/// (pass a zero forcing).
double recursion_residual(const VolterraSystem& system, const Forcing& forcing, const Sequence& states);

}  // namespace volterra
