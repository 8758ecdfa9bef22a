#include "ctrlcap/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>

namespace ctrlcap::numerics {

template <>
double from_big<double>(const BigFloat& x) {
  return x.to_double();
}

template <>
BigFloat from_big<BigFloat>(const BigFloat& x) {
  return to_big(x);
}

template <>
BigFloat big_of<double>(const double& x) {
  return BigFloat(x);
}

template <>
BigFloat big_of<BigFloat>(const BigFloat& x) {
  return to_big(x);
}

namespace {

using std::abs;
using std::hypot;
using std::sqrt;

template <class R>
R sign_of(const R& x) {
  return x < R(0) ? R(-1) : R(1);
}

// Implicit QL on a real symmetric tridiagonal matrix (diagonal d, off-diagonal
// e with e[i] coupling i and i+1, e[n-1] = 0). Rotations accumulate into z.
template <class R>
void tridiagonal_ql(std::vector<R>& d, std::vector<R>& e, Matrix<R>& z) {
  const int n = static_cast<int>(d.size());
  const R eps = RealTraits<R>::epsilon();
  R f(0);
  R tst1(0);
  for (int l = 0; l < n; ++l) {
    R t = abs(d[l]) + abs(e[l]);
    if (t > tst1) tst1 = t;
    int m = l;
    while (m < n - 1) {
      if (abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 75) fail(ErrorKind::NoConvergence, "eig_hermitian: QL iteration budget exceeded");
        R g = d[l];
        R p = (d[l + 1] - g) / (R(2) * e[l]);
        R r = hypot(p, R(1));
        if (p < R(0)) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const R dl1 = d[l + 1];
        R h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        R c(1), c2(1), c3(1);
        const R el1 = e[l + 1];
        R s(0), s2(0);
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < static_cast<int>(z.rows()); ++k) {
            h = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * h;
            z(k, i) = c * z(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = R(0);
  }
}

// Householder vector v (unit norm) with (I - 2 v v^*) x = alpha e_1.
// Returns false when x is already zero.
template <class R>
bool householder(std::vector<Cx<R>>& x, Cx<R>& alpha) {
  R norm(0);
  for (const auto& z : x) norm += norm2(z);
  norm = sqrt(norm);
  if (norm == R(0)) return false;
  alpha = -(phase(x[0]) * norm);
  x[0] -= alpha;
  R vnorm(0);
  for (const auto& z : x) vnorm += norm2(z);
  vnorm = sqrt(vnorm);
  if (vnorm == R(0)) return false;
  for (auto& z : x) z /= vnorm;
  return true;
}

template <class R>
void sort_svd_descending(Svd<R>& s) {
  const std::size_t r = s.values.size();
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.values[a] > s.values[b]; });
  Svd<R> sorted;
  sorted.values.reserve(r);
  sorted.u = CMatrix<R>(s.u.rows(), r);
  sorted.vh = CMatrix<R>(r, s.vh.cols());
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t src = order[k];
    sorted.values.push_back(s.values[src]);
    for (std::size_t i = 0; i < s.u.rows(); ++i) sorted.u(i, k) = s.u(i, src);
    for (std::size_t j = 0; j < s.vh.cols(); ++j) sorted.vh(k, j) = s.vh(src, j);
  }
  s = std::move(sorted);
}

}  // namespace

template <class R>
Cx<R> complex_sqrt(const Cx<R>& z) {
  const R r = abs(z);
  if (r == R(0)) return Cx<R>(R(0));
  R re = sqrt((r + z.re) / R(2));
  R im = sqrt((r - z.re) / R(2));
  if (z.im < R(0)) im = -im;
  return {re, im};
}

template <class R>
bool is_hermitian(const CMatrix<R>& m) {
  if (!m.square()) return false;
  R worst(0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) {
      R d = abs(m(i, j) - conj(m(j, i)));
      if (d > worst) worst = d;
    }
  return worst <= tolerance<R>(kTolerance.hermitian) * max_abs(m);
}

template <class R>
HermitianEigen<R> eig_hermitian(const CMatrix<R>& m, bool want_vectors) {
  require(m.square(), ErrorKind::DimensionMismatch, "eig_hermitian: matrix not square");
  require(is_hermitian(m), ErrorKind::NotHermitian, "eig_hermitian: matrix is not Hermitian");
  const std::size_t n = m.rows();
  HermitianEigen<R> out;
  if (n == 0) return out;

  CMatrix<R> h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = Cx<R>(m(i, i).re);
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = (m(i, j) + conj(m(j, i))) / R(2);
      h(j, i) = conj(h(i, j));
    }
  }
  CMatrix<R> q = want_vectors ? CMatrix<R>::identity(n) : CMatrix<R>(0, 0);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t r = n - k - 1;
    std::vector<Cx<R>> v(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = h(k + 1 + i, k);
    Cx<R> alpha;
    if (!householder(v, alpha)) continue;
    // Trailing block B <- P B P = B - 2 (v w^* + w v^*), w = Bv - (v^* B v) v.
    std::vector<Cx<R>> p(r, Cx<R>(0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) add_product(p[i], h(k + 1 + i, k + 1 + j), v[j]);
    Cx<R> kv(0);
    for (std::size_t i = 0; i < r; ++i) add_adjoint_product(kv, v[i], p[i]);
    std::vector<Cx<R>> w(r);
    for (std::size_t i = 0; i < r; ++i) w[i] = p[i] - v[i] * kv.re;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        Cx<R> upd(0);
        add_conj_product(upd, v[i], w[j]);
        add_conj_product(upd, w[i], v[j]);
        h(k + 1 + i, k + 1 + j) -= upd * R(2);
      }
    }
    h(k + 1, k) = alpha;
    h(k, k + 1) = conj(alpha);
    for (std::size_t i = 1; i < r; ++i) {
      h(k + 1 + i, k) = Cx<R>(0);
      h(k, k + 1 + i) = Cx<R>(0);
    }
    for (std::size_t i = 0; i < q.rows(); ++i) {
      Cx<R> s(0);
      for (std::size_t j = 0; j < r; ++j) add_product(s, q(i, k + 1 + j), v[j]);
      s *= R(2);
      for (std::size_t j = 0; j < r; ++j) {
        Cx<R> t(0);
        add_conj_product(t, s, v[j]);
        q(i, k + 1 + j) -= t;
      }
    }
  }

  // Rotate the complex off-diagonal onto the positive reals.
  std::vector<R> d(n), e(n, R(0));
  std::vector<Cx<R>> ph(n, Cx<R>(1));
  for (std::size_t i = 0; i < n; ++i) d[i] = h(i, i).re;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Cx<R>& off = h(i + 1, i);
    e[i] = abs(off);
    ph[i + 1] = ph[i] * phase(off);
  }
  Matrix<R> z = want_vectors ? Matrix<R>::identity(n) : Matrix<R>(0, 0);
  tridiagonal_ql(d, e, z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  if (!want_vectors) {
    for (std::size_t c = 0; c < n; ++c) out.values.push_back(d[order[c]]);
    return out;
  }
  CMatrix<R> qd(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) qd(i, l) = q(i, l) * ph[l];

  out.values.reserve(n);
  out.vectors = CMatrix<R>(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values.push_back(d[src]);
    for (std::size_t i = 0; i < n; ++i) {
      Cx<R> acc(0);
      for (std::size_t l = 0; l < n; ++l) {
        add_product(acc.re, qd(i, l).re, z(l, src));
        add_product(acc.im, qd(i, l).im, z(l, src));
      }
      out.vectors(i, c) = acc;
    }
  }
  return out;
}

template <class R>
Svd<R> svd_jacobi(const CMatrix<R>& m) {
  const bool flipped = m.rows() < m.cols();
  const CMatrix<R> a = flipped ? adjoint(m) : m;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();

  std::vector<std::vector<Cx<R>>> c(cols, std::vector<Cx<R>>(rows));
  std::vector<std::vector<Cx<R>>> v(cols, std::vector<Cx<R>>(cols, Cx<R>(0)));
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) c[j][i] = a(i, j);
    v[j][j] = Cx<R>(1);
  }

  const R tol = RealTraits<R>::epsilon() * R(static_cast<int>(std::max<std::size_t>(rows, 1)));
  bool converged = cols < 2;
  for (int sweep = 0; sweep < 80 && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < cols; ++i) {
      for (std::size_t j = i + 1; j < cols; ++j) {
        R alpha(0), beta(0);
        Cx<R> gamma(0);
        for (std::size_t k = 0; k < rows; ++k) {
          alpha += norm2(c[i][k]);
          beta += norm2(c[j][k]);
          add_adjoint_product(gamma, c[i][k], c[j][k]);
        }
        const R g = abs(gamma);
        if (g == R(0) || g <= tol * sqrt(alpha * beta)) continue;
        rotated = true;
        const Cx<R> ph = conj(gamma / g);
        const R zeta = (beta - alpha) / (R(2) * g);
        const R t = sign_of(zeta) / (abs(zeta) + sqrt(R(1) + zeta * zeta));
        const R cs = R(1) / sqrt(R(1) + t * t);
        const R sn = cs * t;
        for (std::size_t k = 0; k < rows; ++k) {
          const Cx<R> ci = c[i][k];
          const Cx<R> cj = c[j][k] * ph;
          c[i][k] = ci * cs - cj * sn;
          c[j][k] = ci * sn + cj * cs;
        }
        for (std::size_t k = 0; k < cols; ++k) {
          const Cx<R> vi = v[i][k];
          const Cx<R> vj = v[j][k] * ph;
          v[i][k] = vi * cs - vj * sn;
          v[j][k] = vi * sn + vj * cs;
        }
      }
    }
    converged = !rotated;
  }
  require(converged, ErrorKind::NoConvergence, "svd: Jacobi sweep budget exceeded");

  // a = U S V^* with U columns c_j / sigma_j; v[j] holds column j of V.
  Svd<R> out;
  out.values.resize(cols);
  out.u = CMatrix<R>(rows, cols);
  out.vh = CMatrix<R>(cols, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    R s(0);
    for (std::size_t k = 0; k < rows; ++k) s += norm2(c[j][k]);
    s = sqrt(s);
    out.values[j] = s;
    for (std::size_t k = 0; k < rows; ++k) out.u(k, j) = s > R(0) ? c[j][k] / s : Cx<R>(0);
    for (std::size_t k = 0; k < cols; ++k) out.vh(j, k) = conj(v[j][k]);
  }
  sort_svd_descending(out);
  if (flipped) {
    // m = a^* = V S U^*
    Svd<R> swapped;
    swapped.values = std::move(out.values);
    swapped.u = adjoint(out.vh);
    swapped.vh = adjoint(out.u);
    return swapped;
  }
  return out;
}

template <class R>
Svd<R> svd(const CMatrix<R>& m) {
  Svd<R> out = svd_jacobi(m);
  if (out.values.empty() || !(out.values.front() > R(0))) return out;
  const int p = RealTraits<R>::bits();
  const R threshold = RealTraits<R>::pow2(-(p / 2)) * out.values.front();
  if (!(out.values.back() < threshold)) return out;
  const int wide = std::max(next_precision(p), kMinExtendedBits);
  if (wide <= p) return out;

  std::vector<BigFloat> gram_values;
  {
    PrecisionScope scope(wide);
    const bool tall = m.rows() >= m.cols();
    CMatrix<BigFloat> w(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = Cx<BigFloat>(big_of(m(i, j).re), big_of(m(i, j).im));
    const CMatrix<BigFloat> g = tall ? gram(adjoint(w)) : gram(w);
    auto eig = eig_hermitian(g);
    for (auto it = eig.values.rbegin(); it != eig.values.rend(); ++it) {
      BigFloat lam = *it < BigFloat(0) ? BigFloat(0) : *it;
      gram_values.push_back(sqrt(lam));
    }
  }
  for (std::size_t k = 0; k < out.values.size() && k < gram_values.size(); ++k)
    out.values[k] = from_big<R>(gram_values[k]);
  return out;
}

template <class R>
LeastSquares<R> least_squares(const CMatrix<R>& basis, const CVector<R>& target) {
  require(basis.rows() == target.size(), ErrorKind::DimensionMismatch, "least_squares: basis/target rows differ");
  require(basis.rows() >= 1, ErrorKind::InvalidArgument, "least_squares: empty target");
  const std::size_t n = basis.rows();
  const std::size_t j = basis.cols();
  LeastSquares<R> out;
  if (j == 0) {
    out.residual_norm = vector_norm(target);
    return out;
  }

  CMatrix<R> a = basis;
  CVector<R> b = target;
  std::vector<std::size_t> perm(j);
  std::iota(perm.begin(), perm.end(), 0);
  const std::size_t steps = std::min(n, j);
  R r00(0);
  std::size_t rank = 0;
  const R rank_tol = tolerance<R>(kTolerance.residual);
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t best = k;
    R best_norm(-1);
    for (std::size_t c = k; c < j; ++c) {
      R s(0);
      for (std::size_t i = k; i < n; ++i) s += norm2(a(i, c));
      if (s > best_norm) {
        best_norm = s;
        best = c;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, best));
      std::swap(perm[k], perm[best]);
    }
    std::vector<Cx<R>> v(n - k);
    for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
    Cx<R> alpha;
    if (!householder(v, alpha)) break;
    for (std::size_t c = k; c < j; ++c) {
      Cx<R> s(0);
      for (std::size_t i = k; i < n; ++i) add_adjoint_product(s, v[i - k], a(i, c));
      s *= R(2);
      for (std::size_t i = k; i < n; ++i) {
        Cx<R> t(0);
        add_product(t, v[i - k], s);
        a(i, c) -= t;
      }
    }
    {
      Cx<R> s(0);
      for (std::size_t i = k; i < n; ++i) add_adjoint_product(s, v[i - k], b[i]);
      s *= R(2);
      for (std::size_t i = k; i < n; ++i) {
        Cx<R> t(0);
        add_product(t, v[i - k], s);
        b[i] -= t;
      }
    }
    const R diag = abs(a(k, k));
    if (k == 0) r00 = diag;
    if (diag <= rank_tol * r00) break;
    rank = k + 1;
  }
  out.rank = rank;
  R res(0);
  for (std::size_t i = rank; i < n; ++i) res += norm2(b[i]);
  out.residual_norm = sqrt(res);

  out.coefficients.assign(j, Cx<R>(0));
  if (rank == j) {
    CVector<R> y(j, Cx<R>(0));
    for (std::size_t ii = j; ii-- > 0;) {
      Cx<R> s = b[ii];
      for (std::size_t c = ii + 1; c < j; ++c) {
        Cx<R> t(0);
        add_product(t, a(ii, c), y[c]);
        s -= t;
      }
      y[ii] = s / a(ii, ii);
    }
    for (std::size_t c = 0; c < j; ++c) out.coefficients[perm[c]] = y[c];
  } else {
    // Minimum-norm solution through the pseudoinverse.
    const Svd<R> s = svd_jacobi(basis);
    const R cutoff = rank_tol * (s.values.empty() ? R(0) : s.values.front());
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      if (!(s.values[k] > cutoff)) continue;
      Cx<R> proj(0);
      for (std::size_t i = 0; i < n; ++i) add_adjoint_product(proj, s.u(i, k), target[i]);
      proj /= s.values[k];
      for (std::size_t c = 0; c < j; ++c) add_adjoint_product(out.coefficients[c], s.vh(k, c), proj);
    }
  }
  return out;
}

template <class R>
R cond2(const CMatrix<R>& m) {
  require(m.square() && m.rows() > 0, ErrorKind::DimensionMismatch, "cond2: matrix not square");
  const Svd<R> s = svd(m);
  const R& smax = s.values.front();
  const R& smin = s.values.back();
  require(smin > tolerance<R>(kTolerance.residual) * smax, ErrorKind::Singular, "cond2: matrix is singular");
  return smax / smin;
}

template <class R>
CMatrix<R> solve(const CMatrix<R>& a_in, const CMatrix<R>& b_in) {
  require(a_in.square(), ErrorKind::DimensionMismatch, "solve: matrix not square");
  require(a_in.rows() == b_in.rows(), ErrorKind::DimensionMismatch, "solve: rhs rows differ");
  const std::size_t n = a_in.rows();
  CMatrix<R> a = a_in;
  CMatrix<R> b = b_in;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    R best = abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      R v = abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    require(best > R(0), ErrorKind::Singular, "solve: singular matrix");
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
      for (std::size_t c = 0; c < b.cols(); ++c) std::swap(b(k, c), b(piv, c));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Cx<R> f = a(i, k) / a(k, k);
      if (f.re == R(0) && f.im == R(0)) continue;
      for (std::size_t c = k; c < n; ++c) {
        Cx<R> t(0);
        add_product(t, f, a(k, c));
        a(i, c) -= t;
      }
      for (std::size_t c = 0; c < b.cols(); ++c) {
        Cx<R> t(0);
        add_product(t, f, b(k, c));
        b(i, c) -= t;
      }
    }
  }
  CMatrix<R> x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = n; i-- > 0;) {
      Cx<R> s = b(i, c);
      for (std::size_t k = i + 1; k < n; ++k) {
        Cx<R> t(0);
        add_product(t, a(i, k), x(k, c));
        s -= t;
      }
      x(i, c) = s / a(i, i);
    }
  }
  return x;
}

template <class R>
CMatrix<R> inverse(const CMatrix<R>& a) {
  return solve(a, CMatrix<R>::identity(a.rows()));
}

template <class R>
Schur<R> schur(const CMatrix<R>& a) {
  require(a.square(), ErrorKind::DimensionMismatch, "schur: matrix not square");
  const std::size_t n = a.rows();
  CMatrix<R> h = a;
  CMatrix<R> z = CMatrix<R>::identity(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t r = n - k - 1;
    std::vector<Cx<R>> v(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = h(k + 1 + i, k);
    Cx<R> alpha;
    if (!householder(v, alpha)) continue;
    for (std::size_t c = k; c < n; ++c) {
      Cx<R> s(0);
      for (std::size_t i = 0; i < r; ++i) add_adjoint_product(s, v[i], h(k + 1 + i, c));
      s *= R(2);
      for (std::size_t i = 0; i < r; ++i) {
        Cx<R> t(0);
        add_product(t, v[i], s);
        h(k + 1 + i, c) -= t;
      }
    }
    auto apply_right = [&](CMatrix<R>& m) {
      for (std::size_t row = 0; row < n; ++row) {
        Cx<R> s(0);
        for (std::size_t i = 0; i < r; ++i) add_product(s, m(row, k + 1 + i), v[i]);
        s *= R(2);
        for (std::size_t i = 0; i < r; ++i) {
          Cx<R> t(0);
          add_conj_product(t, s, v[i]);
          m(row, k + 1 + i) -= t;
        }
      }
    };
    apply_right(h);
    apply_right(z);
    h(k + 1, k) = alpha;
    for (std::size_t i = 1; i < r; ++i) h(k + 1 + i, k) = Cx<R>(0);
  }

  const R eps = RealTraits<R>::epsilon();
  const R scale = std::max(frobenius_norm(h), R(1e-300));
  std::size_t hi = n == 0 ? 0 : n - 1;
  int iter = 0;
  int total = 0;
  const int budget = 60 * static_cast<int>(std::max<std::size_t>(n, 1));
  struct Rotation {
    R c;
    Cx<R> s;
  };
  std::vector<Rotation> rot;
  while (hi > 0) {
    std::size_t l = hi;
    while (l > 0) {
      R s = abs(h(l - 1, l - 1)) + abs(h(l, l));
      if (s == R(0)) s = scale;
      if (abs(h(l, l - 1)) <= eps * s) {
        h(l, l - 1) = Cx<R>(0);
        break;
      }
      --l;
    }
    if (l == hi) {
      --hi;
      iter = 0;
      continue;
    }
    ++iter;
    require(++total <= budget, ErrorKind::NoConvergence, "schur: QR iteration budget exceeded");

    Cx<R> mu;
    if (iter % 11 == 10) {
      mu = h(hi, hi) + Cx<R>(abs(h(hi, hi - 1).re) + abs(h(hi - 1, hi - 2 < hi ? hi - 1 : hi).re));
    } else {
      const Cx<R>& a11 = h(hi - 1, hi - 1);
      const Cx<R>& a12 = h(hi - 1, hi);
      const Cx<R>& a21 = h(hi, hi - 1);
      const Cx<R>& a22 = h(hi, hi);
      const Cx<R> half_diff = (a11 - a22) / R(2);
      const Cx<R> disc = complex_sqrt(half_diff * half_diff + a12 * a21);
      const Cx<R> mean = (a11 + a22) / R(2);
      const Cx<R> m1 = mean + disc;
      const Cx<R> m2 = mean - disc;
      mu = abs(m1 - a22) < abs(m2 - a22) ? m1 : m2;
    }

    for (std::size_t i = l; i <= hi; ++i) h(i, i) -= mu;
    rot.clear();
    for (std::size_t k = l; k < hi; ++k) {
      const Cx<R> x = h(k, k);
      const Cx<R> y = h(k + 1, k);
      const R rr = sqrt(norm2(x) + norm2(y));
      Rotation g{R(1), Cx<R>(0)};
      if (rr > R(0)) {
        const R ax = abs(x);
        g.c = ax / rr;
        g.s = (ax > R(0) ? phase(x) : Cx<R>(1)) * conj(y) / rr;
      }
      for (std::size_t c = k; c < n; ++c) {
        const Cx<R> p = h(k, c);
        const Cx<R> q = h(k + 1, c);
        h(k, c) = p * g.c + g.s * q;
        h(k + 1, c) = q * g.c - conj(g.s) * p;
      }
      rot.push_back(g);
    }
    for (std::size_t k = l; k < hi; ++k) {
      const Rotation& g = rot[k - l];
      const std::size_t last = std::min(k + 2, hi);
      for (std::size_t i = 0; i <= last; ++i) {
        const Cx<R> p = h(i, k);
        const Cx<R> q = h(i, k + 1);
        h(i, k) = p * g.c + conj(g.s) * q;
        h(i, k + 1) = q * g.c - g.s * p;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const Cx<R> p = z(i, k);
        const Cx<R> q = z(i, k + 1);
        z(i, k) = p * g.c + conj(g.s) * q;
        z(i, k + 1) = q * g.c - g.s * p;
      }
    }
    for (std::size_t i = l; i <= hi; ++i) h(i, i) += mu;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) h(i, j) = Cx<R>(0);
  return {std::move(h), std::move(z)};
}

template <class R>
Eigen<R> eig_general(const CMatrix<R>& a) {
  const Schur<R> s = schur(a);
  const std::size_t n = a.rows();
  Eigen<R> out;
  out.values.resize(n);
  out.vectors = CMatrix<R>(n, n);
  const R eps = RealTraits<R>::epsilon();
  R smin = eps * frobenius_norm(s.t);
  if (!(smin > R(0))) smin = RealTraits<R>::pow2(-1000);
  const R big = RealTraits<R>::pow2(200);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = s.t(j, j);
    CVector<R> y(n, Cx<R>(0));
    y[j] = Cx<R>(1);
    for (std::size_t i = j; i-- > 0;) {
      Cx<R> acc(0);
      for (std::size_t k = i + 1; k <= j; ++k) add_product(acc, s.t(i, k), y[k]);
      Cx<R> den = s.t(i, i) - s.t(j, j);
      if (abs(den) < smin) den = Cx<R>(smin);
      y[i] = -(acc / den);
      const R mag = abs(y[i]);
      if (mag > big) {
        for (std::size_t k = i; k <= j; ++k) y[k] /= mag;
      }
    }
    CVector<R> x = multiply(s.z, y);
    const R nrm = vector_norm(x);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = x[i] / nrm;
  }
  return out;
}

#define CTRLCAP_LINALG_INSTANTIATE(R)                                        \
  template bool is_hermitian<R>(const CMatrix<R>&);                          \
  template HermitianEigen<R> eig_hermitian<R>(const CMatrix<R>&, bool);           \
  template Svd<R> svd_jacobi<R>(const CMatrix<R>&);                          \
  template Svd<R> svd<R>(const CMatrix<R>&);                                 \
  template LeastSquares<R> least_squares<R>(const CMatrix<R>&, const CVector<R>&); \
  template R cond2<R>(const CMatrix<R>&);                                    \
  template CMatrix<R> solve<R>(const CMatrix<R>&, const CMatrix<R>&);       \
  template CMatrix<R> inverse<R>(const CMatrix<R>&);                         \
  template Schur<R> schur<R>(const CMatrix<R>&);                             \
  template Eigen<R> eig_general<R>(const CMatrix<R>&);                       \
  template Cx<R> complex_sqrt<R>(const Cx<R>&);

CTRLCAP_LINALG_INSTANTIATE(double)
CTRLCAP_LINALG_INSTANTIATE(BigFloat)

}  // namespace ctrlcap::numerics
