#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latfricke/rational.hpp"

namespace latfricke {

template <class T>
using Vec = std::vector<T>;

// Dense row-major matrix.  Vectors are rows unless stated otherwise.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (const auto& x : row) a_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(const Vec<T>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix from_rows(const std::vector<Vec<T>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec<T> row(std::size_t i) const {
    return Vec<T>(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  Vec<T> col(std::size_t j) const {
    Vec<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_row(std::size_t i, const Vec<T>& r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("dimension mismatch in product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    check_same(a, b);
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    check_same(a, b);
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
    return a;
  }
  friend Matrix operator*(const T& s, Matrix a) {
    for (auto& x : a.a_) x *= s;
    return a;
  }
  Matrix operator-() const {
    Matrix m(*this);
    for (auto& x : m.a_) x = -x;
    return m;
  }

  const std::vector<T>& data() const { return a_; }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("dimension mismatch");
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using RationalMatrix = Matrix<Rational>;
using IntMatrix = Matrix<Integer>;
using RatVec = Vec<Rational>;
using IntVec = Vec<Integer>;

// Row vector times matrix.
template <class T>
Vec<T> row_times(const Vec<T>& v, const Matrix<T>& m) {
  if (v.size() != m.rows()) throw std::invalid_argument("dimension mismatch in row_times");
  Vec<T> out(m.cols(), T(0));
  for (std::size_t k = 0; k < m.rows(); ++k) {
    if (v[k] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[k] * m(k, j);
  }
  return out;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// v G v^T.
template <class T>
T quad_form(const Matrix<T>& g, const Vec<T>& v) {
  T s(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    T t(0);
    for (std::size_t j = 0; j < v.size(); ++j) t += g(i, j) * v[j];
    s += v[i] * t;
  }
  return s;
}

RationalMatrix to_rational(const IntMatrix& m);
RatVec to_rational(const IntVec& v);
bool is_integral(const RationalMatrix& m);
IntMatrix to_integer(const RationalMatrix& m);  // throws if not integral

Rational det(const RationalMatrix& m);
Integer det(const IntMatrix& m);  // fraction-free elimination
RationalMatrix inverse(const RationalMatrix& m);  // throws SingularMatrix
// Inverse of an integer matrix with determinant +-1, as an integer matrix.
IntMatrix inverse_unimodular(const IntMatrix& m);
std::size_t rank(const RationalMatrix& m);

// Gram matrix M M^T.
RationalMatrix gram(const RationalMatrix& m);

// Sorted j-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t j);
template <class T>
Matrix<T> submatrix(const Matrix<T>& m, const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols) {
  Matrix<T> s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = m(rows[i], cols[j]);
  return s;
}
// j-th compound matrix: entries are j x j minors indexed by sorted subsets.
RationalMatrix compound(const RationalMatrix& m, std::size_t j);
IntMatrix compound(const IntMatrix& m, std::size_t j);

Integer content(const IntVec& v);
bool is_primitive(const IntVec& v);

std::string to_string(const RationalMatrix& m);
std::string to_string(const IntMatrix& m);

}  // namespace latfricke
