#pragma once

#include "volterra/linalg.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace volterra {

/// A finite window x(0..size-1) of a unilateral sequence whose elements are
/// rows x cols complex matrices (cols == 1 for state vectors).
///
/// Storage is one contiguous column-major buffer so the hot loops (shift
/// resolvents, FFT blocks) never allocate per element.
class Sequence {
 public:
  Sequence() = default;
  Sequence(Index rows, Index cols, std::size_t length);

  static Sequence from_vectors(std::span<const Vector> values);
  static Sequence from_matrices(std::span<const Matrix> values);
  static Sequence scalar(std::span<const cplx> values);

  /// Builds x(n) = f(n) for n < length; f returns something convertible to Matrix.
  template <class F>
  static Sequence generate(Index rows, Index cols, std::size_t length, F&& f) {
    Sequence s(rows, cols, length);
    for (std::size_t n = 0; n < length; ++n) s[n] = f(n);
    return s;
  }

  std::size_t size() const { return length_; }
  bool empty() const { return length_ == 0; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index element_size() const { return rows_ * cols_; }

  Eigen::Map<Matrix> operator[](std::size_t n) {
    return Eigen::Map<Matrix>(data_.data() + n * element_size(), rows_, cols_);
  }
  Eigen::Map<const Matrix> operator[](std::size_t n) const {
    return Eigen::Map<const Matrix>(data_.data() + n * element_size(), rows_, cols_);
  }

  /// Operator norm of x(n).
  double norm_at(std::size_t n) const;
  /// max_n ‖x(n)‖ over the stored window.
  double sup_norm() const;

  /// (S^k x)(n) = x(n + k), truncated to the stored window.
  Sequence shifted(std::size_t k) const;
  Sequence slice(std::size_t begin, std::size_t end) const;
  /// Left-multiplies every element by m.
  Sequence left_multiplied(const Matrix& m) const;

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::size_t length_ = 0;
  std::vector<cplx> data_;
};

Sequence operator+(const Sequence& a, const Sequence& b);
Sequence operator-(const Sequence& a, const Sequence& b);

/// Pointwise differences x(n+1) - x(n), n < size-1.
Sequence differences(const Sequence& x);

}  // namespace volterra
