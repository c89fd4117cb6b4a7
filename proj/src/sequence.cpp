#include "volterra/sequence.hpp"

#include <algorithm>
#include <stdexcept>

namespace volterra {

Sequence::Sequence(Index rows, Index cols, std::size_t length)
    : rows_(rows), cols_(cols), length_(length),
      data_(static_cast<std::size_t>(rows * cols) * length, cplx{0.0, 0.0}) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sequence elements must be at least 1x1");
}

Sequence Sequence::from_vectors(std::span<const Vector> values) {
  if (values.empty()) throw std::invalid_argument("cannot infer element shape of an empty sequence");
  Sequence s(values.front().size(), 1, values.size());
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (values[n].size() != s.rows_) throw std::invalid_argument("inconsistent vector lengths in sequence");
    s[n] = values[n];
  }
  return s;
}

Sequence Sequence::from_matrices(std::span<const Matrix> values) {
  if (values.empty()) throw std::invalid_argument("cannot infer element shape of an empty sequence");
  Sequence s(values.front().rows(), values.front().cols(), values.size());
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (values[n].rows() != s.rows_ || values[n].cols() != s.cols_)
      throw std::invalid_argument("inconsistent matrix shapes in sequence");
    s[n] = values[n];
  }
  return s;
}

Sequence Sequence::scalar(std::span<const cplx> values) {
  Sequence s(1, 1, values.size());
  std::copy(values.begin(), values.end(), s.data_.begin());
  return s;
}

double Sequence::norm_at(std::size_t n) const { return operator_norm((*this)[n]); }

double Sequence::sup_norm() const {
  double sup = 0.0;
  for (std::size_t n = 0; n < length_; ++n) sup = std::max(sup, norm_at(n));
  return sup;
}

Sequence Sequence::shifted(std::size_t k) const {
  const std::size_t len = k < length_ ? length_ - k : 0;
  Sequence s(rows_, cols_, len);
  const auto es = static_cast<std::size_t>(element_size());
  std::copy(data_.begin() + static_cast<std::ptrdiff_t>(std::min(k, length_) * es), data_.end(), s.data_.begin());
  return s;
}

Sequence Sequence::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > length_) throw std::out_of_range("sequence slice out of range");
  Sequence s(rows_, cols_, end - begin);
  const auto es = static_cast<std::size_t>(element_size());
  std::copy(data_.begin() + static_cast<std::ptrdiff_t>(begin * es),
            data_.begin() + static_cast<std::ptrdiff_t>(end * es), s.data_.begin());
  return s;
}

Sequence Sequence::left_multiplied(const Matrix& m) const {
  if (m.cols() != rows_) throw std::invalid_argument("matrix does not conform to sequence elements");
  Sequence s(m.rows(), cols_, length_);
  for (std::size_t n = 0; n < length_; ++n) s[n].noalias() = m * (*this)[n];
  return s;
}

namespace {
Sequence combine(const Sequence& a, const Sequence& b, double sign) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.size() != b.size())
    throw std::invalid_argument("sequence shapes differ");
  Sequence out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += sign * bd[i];
  return out;
}
}  // namespace

Sequence operator+(const Sequence& a, const Sequence& b) { return combine(a, b, 1.0); }
Sequence operator-(const Sequence& a, const Sequence& b) { return combine(a, b, -1.0); }

Sequence differences(const Sequence& x) {
  if (x.size() < 2) throw std::invalid_argument("differences need at least two elements");
  Sequence d(x.rows(), x.cols(), x.size() - 1);
  for (std::size_t n = 0; n + 1 < x.size(); ++n) d[n] = x[n + 1] - x[n];
  return d;
}

}  // namespace volterra
