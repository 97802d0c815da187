#ifndef MOPRL_MATRIX_HPP
#define MOPRL_MATRIX_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "moprl/errors.hpp"
#include "moprl/scalar.hpp"

namespace moprl {

// Small dense matrix over an exact or big-float scalar. Everything in the
// pipeline is an explicit truncation, so plain row-major storage is enough.
template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(long rows, long cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), T(0)) {}

  static Matrix identity(long n) {
    Matrix m(n, n);
    for (long i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  long rows() const { return rows_; }
  long cols() const { return cols_; }

  T& operator()(long i, long j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const T& operator()(long i, long j) const {
    return data_[static_cast<std::size_t>(i * cols_ + j)];
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix r(rows_, o.cols_);
    for (long i = 0; i < rows_; ++i)
      for (long k = 0; k < cols_; ++k) {
        const T& v = (*this)(i, k);
        if (v == 0) continue;
        for (long j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
      }
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("matrix difference shape mismatch");
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (long i = 0; i < rows_; ++i)
      for (long j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

private:
  long rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <class T>
T max_abs(const Matrix<T>& m) {
  T r(0);
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) {
      T v = abs_value(m(i, j));
      if (v > r) r = v;
    }
  return r;
}

template <class T>
bool is_strictly_lower_zero(const Matrix<T>& m) {
  for (long i = 1; i < m.rows(); ++i)
    for (long j = 0; j < i && j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

template <class T>
bool is_strictly_upper_zero(const Matrix<T>& m) {
  for (long i = 0; i < m.rows(); ++i)
    for (long j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

namespace detail {

template <class T>
Matrix<T> invert_lower(const Matrix<T>& L) {
  const long n = L.rows();
  Matrix<T> X(n, n);
  for (long j = 0; j < n; ++j) {
    if (L(j, j) == 0) throw SingularSystem("triangular inverse: zero diagonal entry");
    X(j, j) = T(1) / L(j, j);
    for (long i = j + 1; i < n; ++i) {
      T s(0);
      for (long k = j; k < i; ++k) s += L(i, k) * X(k, j);
      if (L(i, i) == 0) throw SingularSystem("triangular inverse: zero diagonal entry");
      X(i, j) = -s / L(i, i);
    }
  }
  return X;
}

}  // namespace detail

// Inverse of a triangular matrix, preserving its shape. The shape is taken
// from the zero pattern; a matrix that is neither lower nor upper
// triangular is rejected.
template <class T>
Matrix<T> triangular_inverse(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("triangular inverse needs a square matrix");
  if (is_strictly_upper_zero(m)) return detail::invert_lower(m);
  if (is_strictly_lower_zero(m)) return detail::invert_lower(m.transpose()).transpose();
  throw std::invalid_argument("matrix is not triangular");
}

// Gaussian elimination with partial pivoting; deterministic on both
// backends (largest-magnitude pivot, exact comparisons on rationals).
// Shared by the direct orthogonality-system solver; deliberately separate
// from the unpivoted factorization code.
template <class T>
std::vector<T> solve_linear(Matrix<T> a, std::vector<T> b) {
  const long n = a.rows();
  if (a.cols() != n || static_cast<long>(b.size()) != n)
    throw std::invalid_argument("solve_linear shape mismatch");
  const T floor = max_abs(a) * ScalarTraits<T>::pivot_floor();
  for (long k = 0; k < n; ++k) {
    long piv = k;
    T best = abs_value(a(k, k));
    for (long i = k + 1; i < n; ++i) {
      T v = abs_value(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0 || (!ScalarTraits<T>::is_exact && best < floor))
      throw SingularSystem("linear system is singular");
    if (piv != k) {
      for (long j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
    }
    for (long i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      T f = a(i, k) / a(k, k);
      a(i, k) = T(0);
      for (long j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
    }
  }
  std::vector<T> x(static_cast<std::size_t>(n), T(0));
  for (long i = n - 1; i >= 0; --i) {
    T s = b[static_cast<std::size_t>(i)];
    for (long j = i + 1; j < n; ++j) s -= a(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s / a(i, i);
  }
  return x;
}

}  // namespace moprl

#endif
