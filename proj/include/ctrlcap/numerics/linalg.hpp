#pragma once

#include <cstddef>
#include <vector>

#include "ctrlcap/numerics/matrix.hpp"

namespace ctrlcap::numerics {

template <class R>
struct HermitianEigen {
  std::vector<R> values;  // ascending
  CMatrix<R> vectors;     // unitary, column j pairs with values[j]
};

template <class R>
struct Svd {
  std::vector<R> values;  // descending, length min(rows, cols)
  CMatrix<R> u;           // rows x r
  CMatrix<R> vh;          // r x cols, so that M = u diag(values) vh
};

template <class R>
struct LeastSquares {
  CVector<R> coefficients;
  R residual_norm;
  std::size_t rank = 0;
};

template <class R>
struct Schur {
  CMatrix<R> t;  // upper triangular
  CMatrix<R> z;  // unitary, A = z t z^*
};

template <class R>
struct Eigen {
  CVector<R> values;
  CMatrix<R> vectors;  // unit-norm columns, A vectors = vectors diag(values)
};

/// max|M - M*| <= 2^(hermitian - p) max|M|.
template <class R>
bool is_hermitian(const CMatrix<R>& m);

/// Hermitian eigendecomposition: Householder tridiagonalization followed by
/// implicit QL with Wilkinson shifts. Throws NotHermitian / NoConvergence.
template <class R>
HermitianEigen<R> eig_hermitian(const CMatrix<R>& m, bool want_vectors = true);

/// One-sided (Hestenes) Jacobi SVD at the active precision.
template <class R>
Svd<R> svd_jacobi(const CMatrix<R>& m);

/// SVD with the precision policy: Jacobi, and when sigma_min/sigma_max falls
/// below 2^(-p/2) the singular values are recomputed from the Gram matrix's
/// eigenvalues at doubled precision.
template <class R>
Svd<R> svd(const CMatrix<R>& m);

/// min_a ||target - basis a||_2 via column-pivoted Householder QR; rank
/// deficient bases get the minimum-norm coefficient vector.
template <class R>
LeastSquares<R> least_squares(const CMatrix<R>& basis, const CVector<R>& target);

/// sigma_max / sigma_min; throws Singular when sigma_min <= 2^(residual-p) sigma_max.
template <class R>
R cond2(const CMatrix<R>& m);

/// Solves A X = B with partial-pivoted LU. Throws Singular on a zero pivot.
template <class R>
CMatrix<R> solve(const CMatrix<R>& a, const CMatrix<R>& b);

template <class R>
CMatrix<R> inverse(const CMatrix<R>& a);

/// Complex Schur form by Householder Hessenberg reduction and shifted QR.
template <class R>
Schur<R> schur(const CMatrix<R>& a);

/// Eigenpairs of a general square matrix from its Schur form.
template <class R>
Eigen<R> eig_general(const CMatrix<R>& a);

/// sqrt with the branch cut on the negative real axis.
template <class R>
Cx<R> complex_sqrt(const Cx<R>& z);

/// Rounds a BigFloat (of any width) into backend R at the active precision.
template <class R>
R from_big(const BigFloat& x);

/// Widens a backend value into a BigFloat at the active precision.
template <class R>
BigFloat big_of(const R& x);

#define CTRLCAP_LINALG_EXTERN(R)                                                    \
  extern template bool is_hermitian<R>(const CMatrix<R>&);                          \
  extern template HermitianEigen<R> eig_hermitian<R>(const CMatrix<R>&, bool);           \
  extern template Svd<R> svd_jacobi<R>(const CMatrix<R>&);                          \
  extern template Svd<R> svd<R>(const CMatrix<R>&);                                 \
  extern template LeastSquares<R> least_squares<R>(const CMatrix<R>&, const CVector<R>&); \
  extern template R cond2<R>(const CMatrix<R>&);                                    \
  extern template CMatrix<R> solve<R>(const CMatrix<R>&, const CMatrix<R>&);       \
  extern template CMatrix<R> inverse<R>(const CMatrix<R>&);                         \
  extern template Schur<R> schur<R>(const CMatrix<R>&);                             \
  extern template Eigen<R> eig_general<R>(const CMatrix<R>&);                       \
  extern template Cx<R> complex_sqrt<R>(const Cx<R>&);

CTRLCAP_LINALG_EXTERN(double)
CTRLCAP_LINALG_EXTERN(BigFloat)

#undef CTRLCAP_LINALG_EXTERN

}  // namespace ctrlcap::numerics
