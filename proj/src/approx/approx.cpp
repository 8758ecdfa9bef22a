#include "ctrlcap/approx/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ctrlcap/numerics/linalg.hpp"

namespace ctrlcap::approx {

using numerics::BigFloat;
using numerics::CMatrix;
using numerics::ComplexMatrix;
using numerics::ComplexVector;
using numerics::CVector;
using numerics::cplx;

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr int kPhiDeskScale = 200;
constexpr int kRemezCap = 200;

double log_binomial(int n, int i) {
  return std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
}

// Chebyshev values T_0..T_deg at x, by the three-term recurrence.
void chebyshev_values(double x, int deg, std::vector<double>& t) {
  t.resize(static_cast<std::size_t>(deg) + 1);
  t[0] = 1;
  if (deg >= 1) t[1] = x;
  for (int k = 2; k <= deg; ++k) t[k] = 2 * x * t[k - 1] - t[k - 2];
}

// Solves the dense real system a x = b in place (partial pivoting).
std::vector<double> solve_real(std::vector<double> a, std::vector<double> b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    require(a[piv * n + k] != 0, ErrorKind::NoConvergence, "phi_exact: singular reference system");
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[piv * n + c]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      if (f == 0) continue;
      for (std::size_t c = k; c < n; ++c) a[i * n + c] -= f * a[k * n + c];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
    x[i] = s / a[i * n + i];
  }
  return x;
}

}  // namespace

std::string_view to_string(Basis b) { return b == Basis::Chebyshev ? "chebyshev" : "faber"; }

double ChebyshevExpansion::evaluate(double x) const {
  if (terms.empty()) return 0;
  std::vector<double> t;
  chebyshev_values(x, terms.front().first, t);
  double acc = 0;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) acc += it->second * t[it->first];
  return acc;
}

ChebyshevExpansion cheb_expansion(int n) {
  require(n >= 0, ErrorKind::InvalidArgument, "cheb_expansion: n must be nonnegative");
  ChebyshevExpansion e;
  e.n = n;
  if (n == 0) {
    e.terms.emplace_back(0, 1.0);
    return e;
  }
  for (int i = 0; 2 * i <= n; ++i) {
    const double delta = 2 * i == n ? 1.0 : 2.0;
    const double coef = std::exp(log_binomial(n, i) + (1 - n) * kLn2) * delta / 2;
    e.terms.emplace_back(n - 2 * i, coef);
  }
  return e;
}

double binomial_tail(int n, int count) {
  if (count <= 0) return 0;
  count = std::min(count, n + 1);
  // Largest term is the last one (i = count - 1 <= n/2 in our use); sum the
  // ratios down from it.
  const int last = count - 1;
  double ratio_sum = 1, ratio = 1;
  for (int i = last; i >= 1; --i) {
    ratio *= static_cast<double>(i) / static_cast<double>(n - i + 1);
    ratio_sum += ratio;
    if (ratio < 1e-18 * ratio_sum) break;
  }
  return std::exp(log_binomial(n, last) + (1 - n) * kLn2 + std::log(ratio_sum));
}

ChebTruncation cheb_truncation(int n, int m) {
  require(n >= 1 && m >= 0 && n >= m, ErrorKind::InvalidArgument, "cheb_truncation requires n >= m >= 0, n >= 1");
  ChebTruncation out;
  const ChebyshevExpansion full = cheb_expansion(n);
  out.poly.n = n;
  for (const auto& term : full.terms)
    if (term.first <= m) out.poly.terms.push_back(term);
  const int i_prime = (n - m + 1) / 2;
  out.tail_bound = binomial_tail(n, i_prime);
  return out;
}

double phi_hoeffding(int n, int m) {
  require(n >= m && m >= 1, ErrorKind::InvalidArgument, "phi_hoeffding requires n >= m >= 1");
  return 2 * std::exp(-static_cast<double>(m) * m / (2.0 * n));
}

MinimaxResult phi_exact(int n, int m) {
  require(n >= 1 && m >= 0 && n >= m, ErrorKind::InvalidArgument, "phi_exact requires n >= m >= 0, n >= 1");
  require(n <= kPhiDeskScale, ErrorKind::DeskScaleExceeded, "phi_exact: n above the desk-scale limit 200");
  MinimaxResult res;
  res.l = n;
  res.m = m;
  res.basis = Basis::Chebyshev;
  const ChebyshevExpansion full = cheb_expansion(n);
  std::vector<double> head(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<std::pair<int, double>> tail;
  for (const auto& [k, a] : full.terms) {
    if (k <= m)
      head[k] = a;
    else
      tail.emplace_back(k, a);
  }
  if (tail.empty()) {
    for (double h : head) res.coefficients.emplace_back(h, 0.0);
    res.grid_size = res.validation_size = 1;
    return res;
  }

  // x^n - p has the parity of n, so the best q does too: solve on x in [0, 1]
  // (theta in [0, pi/2]) with the same-parity Chebyshev polynomials only.
  std::vector<int> basis;
  for (int j = n % 2; j <= m; j += 2) basis.push_back(j);
  const std::size_t nref = basis.size() + 1;
  const bool even = n % 2 == 0;
  const double half_pi = std::numbers::pi / 2;
  std::vector<double> t;
  std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
  auto tail_at = [&](double x) {
    chebyshev_values(x, n, t);
    double acc = 0;
    for (const auto& [k, a] : tail) acc += a * t[k];
    return acc;
  };
  auto err_at_theta = [&](double theta) {
    const double x = std::cos(theta);
    double acc = tail_at(x);  // fills t up to n >= m
    for (int j = 0; j <= m; ++j) acc -= c[j] * t[j];
    return acc;
  };

  std::vector<double> ref(nref);
  for (std::size_t i = 0; i < nref; ++i)
    ref[i] = std::numbers::pi * static_cast<double>(i) /
             (even ? 2.0 * static_cast<double>(std::max<std::size_t>(nref - 1, 1)) : 2.0 * static_cast<double>(nref) - 1);

  const std::size_t grid = 16 * (static_cast<std::size_t>(n) + 2);
  const double golden = (std::sqrt(5.0) - 1) / 2;
  // Maximises |e| on [lo, hi] by golden section; returns (theta, |e|).
  auto refine = [&](double lo, double hi) {
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = std::abs(err_at_theta(x1)), f2 = std::abs(err_at_theta(x2));
    for (int it = 0; it < 50; ++it) {
      if (f1 > f2) {
        hi = x2, x2 = x1, f2 = f1;
        x1 = hi - golden * (hi - lo);
        f1 = std::abs(err_at_theta(x1));
      } else {
        lo = x1, x1 = x2, f1 = f2;
        x2 = lo + golden * (hi - lo);
        f2 = std::abs(err_at_theta(x2));
      }
    }
    return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
  };
  struct Extremum {
    double theta, value;  // value is signed
  };
  // Local extrema of e on a grid of `points` cells, refined.
  auto extrema = [&](std::size_t points, double span) {
    const double step = span / static_cast<double>(points);
    std::vector<double> e(points + 1);
    for (std::size_t g = 0; g <= points; ++g) e[g] = err_at_theta(step * static_cast<double>(g));
    std::vector<Extremum> out;
    for (std::size_t g = 0; g <= points; ++g) {
      const double v = std::abs(e[g]);
      const bool left = g == 0 || v >= std::abs(e[g - 1]);
      const bool right = g == points || v > std::abs(e[g + 1]);
      if (!left || !right) continue;
      Extremum x{step * static_cast<double>(g), e[g]};
      if (g > 0 && g < points) {
        const auto [th, f] = refine(step * static_cast<double>(g - 1), step * static_cast<double>(g + 1));
        if (f > v) x = {th, err_at_theta(th)};
      }
      out.push_back(x);
    }
    return out;
  };
  auto peak = [](const std::vector<Extremum>& xs) {
    double u = 0;
    for (const auto& x : xs) u = std::max(u, std::abs(x.value));
    return u;
  };

  double h = 0, best_upper = std::numeric_limits<double>::infinity(), best_lower = 0;
  std::vector<double> best_c = c;
  int iter = 0;
  for (; iter < kRemezCap; ++iter) {
    std::vector<double> a(nref * nref), rhs(nref);
    for (std::size_t i = 0; i < nref; ++i) {
      const double x = std::cos(ref[i]);
      rhs[i] = tail_at(x);
      for (std::size_t j = 0; j + 1 < nref; ++j) a[i * nref + j] = t[basis[j]];
      a[i * nref + nref - 1] = (i % 2 == 0) ? 1.0 : -1.0;
    }
    const auto sol = solve_real(a, rhs, nref);
    for (std::size_t j = 0; j + 1 < nref; ++j) c[basis[j]] = sol[j];
    h = sol[nref - 1];
    std::vector<Extremum> ext = extrema(grid, half_pi);
    const double upper = peak(ext);
    best_lower = std::max(best_lower, std::abs(h));
    if (upper < best_upper) {
      best_upper = upper;
      best_c = c;
    }
    if (best_upper - best_lower <= 1e-11 * best_upper) break;
    // Multi-point exchange: keep the largest extremum of each sign run, then
    // trim to m + 2 alternating points without dropping the peak.
    std::vector<Extremum> alt;
    for (const auto& x : ext) {
      if (x.value == 0) continue;
      if (!alt.empty() && (alt.back().value > 0) == (x.value > 0)) {
        if (std::abs(x.value) > std::abs(alt.back().value)) alt.back() = x;
      } else {
        alt.push_back(x);
      }
    }
    if (alt.size() < nref) break;
    while (alt.size() > nref) {
      if (alt.size() == nref + 1) {
        if (std::abs(alt.front().value) < std::abs(alt.back().value))
          alt.erase(alt.begin());
        else
          alt.pop_back();
        continue;
      }
      std::size_t lo = 0;
      for (std::size_t i = 1; i < alt.size(); ++i)
        if (std::abs(alt[i].value) < std::abs(alt[lo].value)) lo = i;
      if (lo == 0 || lo + 1 == alt.size()) {
        alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(lo));
      } else {
        const std::size_t other = std::abs(alt[lo - 1].value) < std::abs(alt[lo + 1].value) ? lo - 1 : lo + 1;
        alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(std::max(lo, other)));
        alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(std::min(lo, other)));
      }
    }
    bool same = true;
    for (std::size_t i = 0; i < nref; ++i) {
      same = same && alt[i].theta == ref[i];
      ref[i] = alt[i].theta;
    }
    if (same) break;
  }
  c = best_c;
  const auto curve = extrema(8 * grid, std::numbers::pi);
  const double validation = peak(curve);
  {
    int last = 0;
    for (const auto& x : curve) {
      if (std::abs(x.value) < (1 - 1e-6) * validation) continue;
      const int sign = x.value > 0 ? 1 : -1;
      if (sign != last) ++res.alternation_points;
      last = sign;
    }
  }
  res.iterations = iter + 1;
  res.solve_error = best_upper;
  res.error = std::max(validation, best_upper);
  res.lower_bound = best_lower;
  res.certified_gap = std::max(0.0, res.error - best_lower);
  res.grid_size = grid + 1;
  res.validation_size = 8 * grid + 1;
  require(res.certified_gap <= 1e-6 * res.error, ErrorKind::NoConvergence,
          "phi_exact: Remez exchange did not reach the certification gap");
  require(res.alternation_points >= m + 2, ErrorKind::NoConvergence,
          "phi_exact: error curve does not equioscillate at m + 2 points");
  for (int j = 0; j <= m; ++j) res.coefficients.emplace_back(head[j] + c[j], 0.0);
  return res;
}

std::complex<double> error_function(const MinimaxResult& r, Point z) {
  if (r.basis == Basis::Chebyshev) {
    const double x = z.real();
    double p = 0;
    std::vector<double> t;
    chebyshev_values(x, std::max<int>(r.m, 1), t);
    for (std::size_t j = 0; j < r.coefficients.size(); ++j) p += r.coefficients[j].real() * t[j];
    return std::pow(x, r.l) - p;
  }
  if (r.degenerate) return 0;
  const Point u = (z - r.center) * std::polar(1.0, -r.theta) / r.rho;
  std::vector<Point> f(static_cast<std::size_t>(r.l) + 1);
  f[0] = 1;
  if (r.l >= 1) f[1] = u;
  if (r.l >= 2) f[2] = u * f[1] - 2 * r.epsilon;
  for (int k = 3; k <= r.l; ++k) f[k] = u * f[k - 1] - r.epsilon * f[k - 2];
  Point e = f[r.l];
  for (std::size_t j = 0; j < r.coefficients.size(); ++j) e -= r.coefficients[j] * f[j];
  return std::pow(r.rho, r.l) * std::polar(1.0, r.l * r.theta) * e;
}

template <class R>
R monic_residual_t(const CVector<R>& d, const CVector<R>& z, int degree) {
  require(degree >= 1, ErrorKind::InvalidArgument, "monic_residual: degree must be >= 1");
  require(d.size() == z.size() && !z.empty(), ErrorKind::DimensionMismatch, "monic_residual: D and z sizes differ");
  const std::size_t n = z.size();
  CMatrix<R> basis(n, static_cast<std::size_t>(degree));
  CVector<R> col = z;
  for (int j = 0; j < degree; ++j) {
    for (std::size_t i = 0; i < n; ++i) basis(i, static_cast<std::size_t>(j)) = col[i];
    for (std::size_t i = 0; i < n; ++i) col[i] = d[i] * col[i];
  }
  return numerics::least_squares(basis, col).residual_norm;
}

template double monic_residual_t<double>(const CVector<double>&, const CVector<double>&, int);
template BigFloat monic_residual_t<BigFloat>(const CVector<BigFloat>&, const CVector<BigFloat>&, int);

double monic_residual(const ComplexVector& d, const ComplexVector& z, int degree) {
  return monic_residual_t<double>(d, z, degree);
}

namespace {

std::vector<std::vector<Point>> faber_table(const std::vector<Point>& u, int l, double eps) {
  std::vector<std::vector<Point>> f(static_cast<std::size_t>(l) + 1, std::vector<Point>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) {
    f[0][i] = 1;
    if (l >= 1) f[1][i] = u[i];
    if (l >= 2) f[2][i] = u[i] * f[1][i] - 2 * eps;
    for (int k = 3; k <= l; ++k) f[k][i] = u[i] * f[k - 1][i] - eps * f[k - 2][i];
  }
  return f;
}

}  // namespace

MinimaxResult err_region(int l, const Region& x, const ErrOptions& options) {
  require(l >= 1, ErrorKind::InvalidArgument, "err_region: l must be >= 1");
  MinimaxResult res;
  res.l = l;
  res.m = l - 1;
  res.basis = Basis::Faber;
  const std::vector<Point> solve = x.boundary_grid(options.solve_points);
  const std::vector<Point> check = x.boundary_grid(options.validation_points);
  res.grid_size = solve.size();
  res.validation_size = check.size();

  const auto ell = x.bounding_ellipse();
  if (x.is_single_point() || ell.a <= 0) {
    res.degenerate = true;
    res.center = solve.front();
    res.coefficients.assign(static_cast<std::size_t>(l), 0.0);
    return res;
  }
  res.center = ell.center;
  res.theta = ell.theta;
  res.rho = (ell.a + ell.b) / 2;
  res.epsilon = (ell.a - ell.b) / (ell.a + ell.b);

  auto to_u = [&](const std::vector<Point>& pts) {
    std::vector<Point> u;
    u.reserve(pts.size());
    const Point rot = std::polar(1.0, -res.theta);
    for (auto z : pts) u.push_back((z - res.center) * rot / res.rho);
    return u;
  };
  const auto fs = faber_table(to_u(solve), l, res.epsilon);
  const std::size_t npts = solve.size();
  const std::size_t nb = static_cast<std::size_t>(l);

  double scale = 0;
  for (const auto& v : fs[l]) scale = std::max(scale, std::abs(v));

  // Weighted least squares; the residual norm is a lower bound on the
  // discrete minimax value for any weights summing to 1.
  auto weighted_ls = [&](const std::vector<double>& w, std::vector<Point>& coef) {
    const double wmax = *std::max_element(w.begin(), w.end());
    std::vector<std::size_t> active;
    double total = 0;
    for (std::size_t i = 0; i < npts; ++i) {
      total += w[i];
      if (w[i] > 1e-16 * wmax) active.push_back(i);
    }
    ComplexMatrix basis(active.size(), nb);
    ComplexVector target(active.size());
    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::size_t i = active[a];
      const double sw = std::sqrt(w[i] / total);
      for (std::size_t j = 0; j < nb; ++j) basis(a, j) = numerics::from_std(fs[j][i] * sw);
      target[a] = numerics::from_std(fs[l][i] * sw);
    }
    const auto ls = numerics::least_squares(basis, target);
    for (std::size_t j = 0; j < nb; ++j) coef[j] = numerics::to_std(ls.coefficients[j]);
    return ls.residual_norm;
  };
  auto residual = [&](const std::vector<Point>& coef, std::vector<Point>& r) {
    double upper = 0;
    for (std::size_t i = 0; i < npts; ++i) {
      Point v = fs[l][i];
      for (std::size_t j = 0; j < nb; ++j) v -= coef[j] * fs[j][i];
      r[i] = v;
      upper = std::max(upper, std::abs(v));
    }
    return upper;
  };
  // Moves each point's weight uphill in |r| along the grid onto the local
  // peak it drains to. The dual optimum sits on the peaks, so this tightens
  // the bound when Lawson weights are still spread around them.
  auto sharpened = [&](const std::vector<double>& w, const std::vector<Point>& r) {
    std::vector<double> out(npts, 0.0);
    for (std::size_t i = 0; i < npts; ++i) {
      std::size_t at = i;
      while (true) {
        std::size_t next = at;
        if (at > 0 && std::abs(r[at - 1]) > std::abs(r[next])) next = at - 1;
        if (at + 1 < npts && std::abs(r[at + 1]) > std::abs(r[next])) next = at + 1;
        if (next == at) break;
        at = next;
      }
      out[at] += w[i];
    }
    return out;
  };

  std::vector<double> w(npts, 1.0 / static_cast<double>(npts));
  std::vector<Point> r(npts), r_probe(npts);
  std::vector<Point> coef(nb, 0.0), best_coef(nb, 0.0), probe(nb, 0.0);
  double best_upper = std::numeric_limits<double>::infinity(), best_lower = 0;
  std::vector<Point> best_r;
  int since_improvement = 0;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    best_lower = std::max(best_lower, weighted_ls(w, coef));
    const double upper = residual(coef, r);
    if (upper < best_upper) {
      since_improvement = upper < best_upper * (1 - 1e-12) ? 0 : since_improvement + 1;
      best_upper = upper;
      best_coef = coef;
      best_r = r;
    } else {
      ++since_improvement;
    }
    if (iter % 10 == 9) {
      const auto ws = sharpened(w, r);
      best_lower = std::max(best_lower, weighted_ls(ws, probe));
      // The peak-weighted solution is also a candidate upper bound.
      const double u2 = residual(probe, r_probe);
      if (u2 < best_upper) {
        best_upper = u2;
        best_coef = probe;
        best_r = r_probe;
      }
    }
    if (best_upper - best_lower <= options.target_relative_gap * best_upper) break;
    if (best_upper <= 1e-13 * scale) break;  // interpolation: error is rounding noise
    if (since_improvement >= 60) {
      // Restart from the best residual when the weights stall.
      for (std::size_t i = 0; i < npts; ++i) w[i] = std::abs(best_r[i]);
      since_improvement = 0;
    } else {
      for (std::size_t i = 0; i < npts; ++i) w[i] *= std::pow(std::abs(r[i]), options.damping);
    }
    double total = 0;
    for (double v : w) total += v;
    require(total > 0 && std::isfinite(total), ErrorKind::NoConvergence, "err_region: Lawson weights degenerated");
    for (double& v : w) v /= total;
  }
  {
    const auto ws = sharpened(w, best_r);
    best_lower = std::max(best_lower, weighted_ls(ws, probe));
  }
  res.iterations = std::min(iter + 1, options.max_iterations);

  const bool noise_level = best_upper <= 1e-13 * scale;
  // Near-circular residuals on polygons leave Lawson a few percent short at
  // the cap; the gap is reported and carried into every downstream bound.
  require(noise_level || best_upper - best_lower <= 5e-2 * best_upper, ErrorKind::NoConvergence,
          "err_region: Lawson iteration cap reached with optimality gap above 5%");

  const double scale_l = std::pow(res.rho, l);
  res.coefficients = best_coef;
  const auto fv = faber_table(to_u(check), l, res.epsilon);
  double validation = 0;
  for (std::size_t i = 0; i < check.size(); ++i) {
    Point v = fv[l][i];
    for (std::size_t j = 0; j < nb; ++j) v -= best_coef[j] * fv[j][i];
    validation = std::max(validation, std::abs(v));
  }
  res.solve_error = best_upper * scale_l;
  res.lower_bound = std::min(best_lower, best_upper) * scale_l;
  res.certified_gap = res.solve_error - res.lower_bound;
  res.error = validation * scale_l;
  return res;
}

std::vector<std::pair<int, double>> err_capacity_trend(const Region& x, int l_max, const ErrOptions& options) {
  require(l_max >= 1 && l_max <= 60, ErrorKind::InvalidArgument, "err_capacity_trend: l_max must lie in [1, 60]");
  std::vector<std::pair<int, double>> out;
  for (int l = 1; l <= l_max; ++l) {
    const auto r = err_region(l, x, options);
    out.emplace_back(l, r.error > 0 ? std::pow(r.error, 1.0 / l) : 0.0);
  }
  return out;
}

}  // namespace ctrlcap::approx
