#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ctrlcap/numerics/linalg.hpp"

using namespace ctrlcap;
using namespace ctrlcap::numerics;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> g;
  ComplexMatrix m(r, c);
  for (auto& z : m.data()) z = cplx(g(rng), g(rng));
  return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix m = random_matrix(rng, n, n);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = (m(i, j) + conj(m(j, i))) / 2.0;
  return h;
}

}  // namespace

TEST(Numerics, EigIdentity) {
  auto e = eig_hermitian(ComplexMatrix::identity(3));
  ASSERT_EQ(e.values.size(), 3u);
  for (double v : e.values) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Numerics, EigDiagonal) {
  ComplexMatrix m{{cplx(0.5), cplx(0)}, {cplx(0), cplx(2.0)}};
  auto e = eig_hermitian(m);
  EXPECT_NEAR(e.values[0], 0.5, 1e-15);
  EXPECT_NEAR(e.values[1], 2.0, 1e-15);
}

TEST(Numerics, EigTwoByTwo) {
  ComplexMatrix m{{cplx(2), cplx(1)}, {cplx(1), cplx(2)}};
  auto e = eig_hermitian(m);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);
}

TEST(Numerics, EigRejectsNonHermitian) {
  ComplexMatrix m{{cplx(1), cplx(2)}, {cplx(0), cplx(1)}};
  try {
    eig_hermitian(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(Numerics, EigPropertyTraceAndResidual) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 12;
    ComplexMatrix h = random_hermitian(rng, n);
    auto e = eig_hermitian(h);
    double tr = 0, sum = 0;
    for (std::size_t i = 0; i < n; ++i) tr += h(i, i).re;
    for (double v : e.values) sum += v;
    EXPECT_NEAR(tr, sum, 1e-12 * n);
    for (std::size_t i = 1; i < n; ++i) EXPECT_LE(e.values[i - 1], e.values[i]);
    // H V - V diag(lambda)
    ComplexMatrix hv = multiply(h, e.vectors);
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, abs(hv(i, j) - e.vectors(i, j) * e.values[j]));
    EXPECT_LT(worst, 1e-12 * (1 + max_abs(h)));
    ComplexMatrix vv = multiply(adjoint(e.vectors), e.vectors);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(abs(vv(i, j) - cplx(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
  }
}

TEST(Numerics, EigExtendedPrecision) {
  PrecisionScope scope(256);
  CMatrix<BigFloat> m(2, 2);
  m(0, 0) = Cx<BigFloat>(2);
  m(0, 1) = Cx<BigFloat>(BigFloat(0), BigFloat(1));
  m(1, 0) = Cx<BigFloat>(BigFloat(0), BigFloat(-1));
  m(1, 1) = Cx<BigFloat>(2);
  auto e = eig_hermitian(m);
  EXPECT_LT(abs(e.values[0] - BigFloat(1)).to_double(), 1e-70);
  EXPECT_LT(abs(e.values[1] - BigFloat(3)).to_double(), 1e-70);
}

TEST(Numerics, SvdDiagonal) {
  ComplexMatrix m{{cplx(3), cplx(0)}, {cplx(0), cplx(4)}};
  auto s = svd(m);
  EXPECT_NEAR(s.values[0], 4.0, 1e-14);
  EXPECT_NEAR(s.values[1], 3.0, 1e-14);
}

TEST(Numerics, SvdColumnVector) {
  ComplexMatrix m{{cplx(3)}, {cplx(4)}};
  auto s = svd(m);
  ASSERT_EQ(s.values.size(), 1u);
  EXPECT_NEAR(s.values[0], 5.0, 1e-14);
}

TEST(Numerics, SvdPropertySquaresMatchGramEigenvalues) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t r = 1 + trial % 6, c = 1 + (trial * 5) % 7;
    ComplexMatrix m = random_matrix(rng, r, c);
    auto s = svd(m);
    ASSERT_EQ(s.values.size(), std::min(r, c));
    auto e = eig_hermitian(r <= c ? gram(m) : gram(adjoint(m)));
    for (std::size_t i = 0; i < s.values.size(); ++i)
      EXPECT_NEAR(s.values[i] * s.values[i], e.values[e.values.size() - 1 - i], 1e-11 * (1 + e.values.back()));
    // reconstruction
    ComplexMatrix us(r, s.values.size());
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < s.values.size(); ++k) us(i, k) = s.u(i, k) * s.values[k];
    ComplexMatrix back = multiply(us, s.vh);
    EXPECT_LT(max_abs(subtract(back, m)), 1e-12 * (1 + s.values[0]));
  }
}

TEST(Numerics, SvdGramRouteRecoversTinySingularValue) {
  const double tiny = 1e-12;
  ComplexMatrix m{{cplx(1), cplx(0)}, {cplx(0), cplx(tiny)}};
  auto s = svd(m);
  EXPECT_NEAR(s.values[1] / tiny, 1.0, 1e-10);
}

TEST(Numerics, LeastSquaresResidual) {
  // fit (1,1,2) with span{(1,0,0),(0,1,0)}: residual 2; fit (1,2) by (1,1): residual sqrt(1/2)
  ComplexMatrix basis{{cplx(1)}, {cplx(1)}};
  ComplexVector target{cplx(1), cplx(2)};
  auto ls = least_squares(basis, target);
  EXPECT_NEAR(ls.residual_norm, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(ls.coefficients[0].re, 1.5, 1e-15);
  ComplexMatrix b2{{cplx(1), cplx(0)}, {cplx(0), cplx(1)}, {cplx(0), cplx(0)}};
  ComplexVector t2{cplx(1), cplx(1), cplx(0, std::sqrt(2.0))};
  EXPECT_NEAR(least_squares(b2, t2).residual_norm, std::sqrt(2.0), 1e-15);
}

TEST(Numerics, LeastSquaresRankDeficientMinNorm) {
  ComplexMatrix basis{{cplx(1), cplx(1)}, {cplx(0), cplx(0)}};
  ComplexVector target{cplx(2), cplx(3)};
  auto ls = least_squares(basis, target);
  EXPECT_EQ(ls.rank, 1u);
  EXPECT_NEAR(ls.residual_norm, 3.0, 1e-14);
  EXPECT_NEAR(ls.coefficients[0].re, 1.0, 1e-14);
  EXPECT_NEAR(ls.coefficients[1].re, 1.0, 1e-14);
}

TEST(Numerics, Cond2Diagonal) {
  ComplexMatrix m{{cplx(2), cplx(0), cplx(0)}, {cplx(0), cplx(0.5), cplx(0)}, {cplx(0), cplx(0), cplx(1)}};
  EXPECT_NEAR(cond2(m), 4.0, 1e-13);
  ComplexMatrix sing{{cplx(1), cplx(1)}, {cplx(1), cplx(1)}};
  EXPECT_THROW(cond2(sing), Error);
}

TEST(Numerics, InverseRoundTrip) {
  std::mt19937_64 rng(3);
  ComplexMatrix m = random_matrix(rng, 6, 6);
  ComplexMatrix prod = multiply(m, inverse(m));
  EXPECT_LT(max_abs(subtract(prod, ComplexMatrix::identity(6))), 1e-12);
}

TEST(Numerics, SchurAndGeneralEigen) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + trial;
    ComplexMatrix a = random_matrix(rng, n, n);
    auto s = schur(a);
    ComplexMatrix back = multiply(multiply(s.z, s.t), adjoint(s.z));
    EXPECT_LT(max_abs(subtract(back, a)), 1e-12 * (1 + max_abs(a)) * n);
    auto e = eig_general(a);
    ComplexMatrix av = multiply(a, e.vectors);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) EXPECT_LT(abs(av(i, j) - e.vectors(i, j) * e.values[j]), 1e-10 * (1 + max_abs(a)));
  }
}

TEST(Numerics, SchurRealRotationHasComplexPair) {
  ComplexMatrix a{{cplx(0), cplx(-1)}, {cplx(1), cplx(0)}};
  auto e = eig_general(a);
  double im0 = e.values[0].im, im1 = e.values[1].im;
  EXPECT_NEAR(std::abs(im0), 1.0, 1e-14);
  EXPECT_NEAR(im0 + im1, 0.0, 1e-14);
}

TEST(Numerics, ComplexSqrtBranch) {
  auto r = complex_sqrt(cplx(-4, 0));
  EXPECT_NEAR(r.re, 0.0, 1e-15);
  EXPECT_NEAR(r.im, 2.0, 1e-15);
}

TEST(Numerics, PrecisionScopeRestores) {
  const int before = working_precision();
  {
    PrecisionScope s(300);
    EXPECT_EQ(working_precision(), 300);
  }
  EXPECT_EQ(working_precision(), before);
  EXPECT_THROW(check_precision(60), Error);
  EXPECT_NO_THROW(check_precision(53));
  EXPECT_EQ(next_precision(53), 106);
  EXPECT_EQ(next_precision(4096), 4096);
}
