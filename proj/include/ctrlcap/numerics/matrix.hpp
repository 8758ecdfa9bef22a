#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "ctrlcap/numerics/complex.hpp"
#include "ctrlcap/numerics/error.hpp"
#include "ctrlcap/numerics/precision.hpp"

namespace ctrlcap::numerics {

/// Dense row-major matrix. The shape is fixed at construction.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    require(data_.size() == rows * cols, ErrorKind::DimensionMismatch, "matrix data size mismatch");
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      require(row.size() == cols_, ErrorKind::DimensionMismatch, "ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> col(std::size_t j) const {
    std::vector<T> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
    return out;
  }

  void set_col(std::size_t j, std::span<const T> values) {
    require(values.size() == rows_, ErrorKind::DimensionMismatch, "column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
  }

  const std::vector<T>& data() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class R>
using CMatrix = Matrix<Cx<R>>;
template <class R>
using CVector = std::vector<Cx<R>>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;

template <class R>
CMatrix<R> widen(const ComplexMatrix& m) {
  CMatrix<R> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = widen<R>(m(i, j));
  return out;
}

template <class R>
CVector<R> widen(const ComplexVector& v) {
  CVector<R> out;
  out.reserve(v.size());
  for (const auto& z : v) out.push_back(widen<R>(z));
  return out;
}

template <class R>
ComplexMatrix narrow(const CMatrix<R>& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = narrow(m(i, j));
  return out;
}

template <class R>
ComplexVector narrow(const CVector<R>& v) {
  ComplexVector out;
  out.reserve(v.size());
  for (const auto& z : v) out.push_back(narrow(z));
  return out;
}

template <class R>
CMatrix<R> adjoint(const CMatrix<R>& m) {
  CMatrix<R> out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = conj(m(i, j));
  return out;
}

template <class R>
CMatrix<R> multiply(const CMatrix<R>& a, const CMatrix<R>& b) {
  require(a.cols() == b.rows(), ErrorKind::DimensionMismatch, "multiply: inner dimensions differ");
  CMatrix<R> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Cx<R>& ail = a(i, l);
      if (ail.re == R(0) && ail.im == R(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) add_product(out(i, j), ail, b(l, j));
    }
  }
  return out;
}

template <class R>
CVector<R> multiply(const CMatrix<R>& a, const CVector<R>& x) {
  require(a.cols() == x.size(), ErrorKind::DimensionMismatch, "multiply: vector length differs");
  CVector<R> out(a.rows(), Cx<R>(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) add_product(out[i], a(i, j), x[j]);
  return out;
}

/// M M^* (Hermitian by construction; only the upper triangle is computed).
template <class R>
CMatrix<R> gram(const CMatrix<R>& m) {
  const std::size_t n = m.rows();
  CMatrix<R> out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Cx<R> acc(0);
      const auto ri = m.row(i);
      const auto rj = m.row(j);
      for (std::size_t l = 0; l < m.cols(); ++l) add_conj_product(acc, ri[l], rj[l]);
      out(i, j) = acc;
    }
    out(i, i).im = R(0);
    for (std::size_t j = 0; j < i; ++j) out(i, j) = conj(out(j, i));
  }
  return out;
}

template <class R>
CMatrix<R> subtract(const CMatrix<R>& a, const CMatrix<R>& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::DimensionMismatch, "subtract: shape mismatch");
  CMatrix<R> out = a;
  for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

template <class R>
R frobenius_norm(const CMatrix<R>& m) {
  using std::sqrt;
  R acc(0);
  for (const auto& z : m.data()) acc += norm2(z);
  return sqrt(acc);
}

template <class R>
R max_abs(const CMatrix<R>& m) {
  R best(0);
  for (const auto& z : m.data()) {
    R a = abs(z);
    if (a > best) best = a;
  }
  return best;
}

template <class R>
R vector_norm(const CVector<R>& v) {
  using std::sqrt;
  R acc(0);
  for (const auto& z : v) acc += norm2(z);
  return sqrt(acc);
}

template <class R>
Cx<R> dot(const CVector<R>& a, const CVector<R>& b) {  // a^* b
  Cx<R> acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) add_adjoint_product(acc, a[i], b[i]);
  return acc;
}

template <class R>
CMatrix<R> diagonal_matrix(const CVector<R>& d) {
  CMatrix<R> out(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
  return out;
}

}  // namespace ctrlcap::numerics
