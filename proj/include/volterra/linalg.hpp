#pragma once

#include <Eigen/Dense>

#include <complex>

namespace volterra {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Spectral norm (largest singular value). Vectors use the Euclidean norm.
double operator_norm(const Eigen::Ref<const Matrix>& m);

double smallest_singular_value(const Eigen::Ref<const Matrix>& m);

bool all_finite(const Eigen::Ref<const Matrix>& m);

/// Maps any angle onto [0, 2π).
double wrap_angle(double theta);

/// Distance between two points of the unit circle measured along the circle.
double angular_distance(double a, double b);

inline cplx unit(double theta) { return std::polar(1.0, theta); }

}  // namespace volterra
