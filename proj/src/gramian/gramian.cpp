#include "ctrlcap/gramian/gramian.hpp"

#include <cmath>
#include <limits>

namespace ctrlcap::gramian {

using numerics::CMatrix;
using numerics::CVector;
using numerics::Cx;
using numerics::RealTraits;
using numerics::kTolerance;

template <class R>
CMatrix<R> controllability_matrix(const LinearSystem& sys, int t) {
  require(t >= 0, ErrorKind::InvalidArgument, "t must be nonnegative");
  const std::size_t n = sys.n(), k = sys.k();
  const CMatrix<R> a = numerics::widen<R>(sys.A());
  CMatrix<R> s(n, (static_cast<std::size_t>(t) + 1) * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) s(i, j) = numerics::widen<R>(sys.B()(i, j));
  CVector<R> next(n);
  for (int step = 1; step <= t; ++step) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t src = (static_cast<std::size_t>(step) - 1) * k + j;
      const std::size_t dst = static_cast<std::size_t>(step) * k + j;
      for (std::size_t i = 0; i < n; ++i) {
        Cx<R> acc(0);
        for (std::size_t l = 0; l < n; ++l) numerics::add_product(acc, a(i, l), s(l, src));
        next[i] = std::move(acc);
      }
      for (std::size_t i = 0; i < n; ++i) s(i, dst) = next[i];
    }
  }
  return s;
}

template CMatrix<double> controllability_matrix<double>(const LinearSystem&, int);
template CMatrix<BigFloat> controllability_matrix<BigFloat>(const LinearSystem&, int);

namespace {

constexpr double kDoubleRangeLimit = 1e150;

template <class R>
bool representable(const CMatrix<R>& s) {
  if constexpr (std::is_same_v<R, double>) {
    for (const auto& z : s.data())
      if (!std::isfinite(z.re) || !std::isfinite(z.im) || std::abs(z.re) > kDoubleRangeLimit ||
          std::abs(z.im) > kDoubleRangeLimit)
        return false;
  }
  return true;
}

struct Attempt {
  GramianReport report;
  bool overflow = false;
};

constexpr double kNativeFloor = 1e-12;

// sum_{i=0}^t x^i for real x.
double geometric_sum(double x, int t) {
  if (std::abs(x - 1) < 1e-4) {
    long double acc = 1, p = 1;
    for (int i = 0; i < t; ++i) acc += (p *= x);
    return static_cast<double>(acc);
  }
  return (std::pow(x, t + 1) - 1) / (x - 1);
}

BigFloat geometric_sum(const BigFloat& x, int t) {
  const BigFloat d = x - BigFloat(1);  // exact for x near 1
  if (d == BigFloat(0)) return BigFloat(t + 1);
  // Guard bits cover the cancellation in x^(t+1) - 1 near x = 1.
  const double lost = std::max(0.0, -d.log10_abs() / std::log10(2.0)) + std::log2(t + 1.0);
  const int bits = numerics::working_precision();
  BigFloat out;
  {
    numerics::PrecisionScope guard(bits + static_cast<int>(lost) + 32);
    out = (pow(x, t + 1) - BigFloat(1)) / d;
  }
  return out * BigFloat(1);
}

bool exactly_hermitian(const ComplexMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if (a(i, j).re != a(j, i).re || a(i, j).im != -a(j, i).im) return false;
  return true;
}

template <class R>
void finish(Attempt& out, const LinearSystem& sys, int t, const R& lmin, const R& lmax) {
  GramianReport& rep = out.report;
  rep.lambda_max = numerics::big_of<R>(lmax);
  rep.rank_deficient = (static_cast<std::size_t>(t) + 1) * sys.k() < sys.n();
  if (rep.rank_deficient) {
    rep.lambda_min = BigFloat(0);
    rep.lambda_min_upper = BigFloat(0);
    rep.resolved = true;
    return;
  }
  rep.lambda_min = numerics::big_of<R>(lmin);
  const R slack = numerics::tolerance<R>(kTolerance.resolve) * lmax;
  rep.lambda_min_upper = numerics::big_of<R>(R(lmin + slack));
  rep.resolved = lmax > R(0) && lmin >= slack;
  if constexpr (std::is_same_v<R, double>) rep.resolved = rep.resolved && lmin >= kNativeFloor;
}

template <class R>
Attempt attempt(const LinearSystem& sys, int t) {
  Attempt out;
  GramianReport& rep = out.report;
  rep.t = t;
  rep.precision_bits_used = RealTraits<R>::bits();
  const CMatrix<R> s = controllability_matrix<R>(sys, t);
  if (!representable(s)) {
    out.overflow = true;
    return out;
  }
  const CMatrix<R> w = numerics::gram(s);
  const auto eig = numerics::eig_hermitian(w, false);
  rep.W = numerics::narrow(w);
  finish<R>(out, sys, t, eig.values.front(), eig.values.back());
  return out;
}

// A = U diag(lambda) U^*: W(t) = U G U^* with
// G_ab = (U^* B B^* U)_ab sum_{i<=t} (lambda_a lambda_b)^i.
template <class R>
Attempt attempt_spectral(const LinearSystem& sys, int t) {
  Attempt out;
  GramianReport& rep = out.report;
  rep.t = t;
  rep.spectral = true;
  rep.precision_bits_used = RealTraits<R>::bits();
  const std::size_t n = sys.n(), k = sys.k();
  const auto ea = numerics::eig_hermitian(numerics::widen<R>(sys.A()));
  const CMatrix<R> bt = numerics::multiply(numerics::adjoint(ea.vectors), numerics::widen<R>(sys.B()));
  CMatrix<R> g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Cx<R> inner(0);
      for (std::size_t c = 0; c < k; ++c) numerics::add_conj_product(inner, bt(i, c), bt(j, c));
      const R sum = geometric_sum(R(ea.values[i] * ea.values[j]), t);
      g(i, j) = Cx<R>(inner.re * sum, inner.im * sum);
      g(j, i) = numerics::conj(g(i, j));
    }
  }
  if (!representable(g)) {
    out.overflow = true;
    return out;
  }
  const auto eig = numerics::eig_hermitian(g, false);
  // W for display only; binary64 is enough here.
  const ComplexMatrix u = numerics::narrow(ea.vectors);
  rep.W = numerics::multiply(numerics::multiply(u, numerics::narrow(g)), numerics::adjoint(u));
  finish<R>(out, sys, t, eig.values.front(), eig.values.back());
  return out;
}

int doubled(int bits) { return std::max(numerics::next_precision(bits), numerics::kMinExtendedBits); }

}  // namespace

GramianReport gramian(const LinearSystem& sys, int t, const GramianOptions& options) {
  require(t >= 0, ErrorKind::InvalidArgument, "gramian: t must be nonnegative");
  numerics::check_precision(options.precision_bits);
  int bits = options.precision_bits;
  const bool spectral = options.spectral && t > static_cast<int>(sys.n()) && exactly_hermitian(sys.A());
  while (true) {
    Attempt a = numerics::with_precision(bits, [&](auto zero) {
      using R = decltype(zero);
      return spectral ? attempt_spectral<R>(sys, t) : attempt<R>(sys, t);
    });
    if (a.overflow) {
      require(options.auto_escalate, ErrorKind::Overflow,
              "gramian: entries of A^t B exceed the binary64 range; use more precision bits");
      bits = doubled(bits);
      continue;
    }
    if (a.report.resolved || !options.auto_escalate || bits >= numerics::kMaxBits) return std::move(a.report);
    if (options.certify_below && a.report.lambda_min_upper <= *options.certify_below) {
      a.report.certified_below = true;
      return std::move(a.report);
    }
    int next = doubled(bits);
    if (options.certify_below && *options.certify_below > BigFloat(0)) {
      // At p >= log2(lambda_max / threshold) + 21 either lambda_min resolves
      // or its upper bound drops below the threshold; skip the rungs before.
      const double need = (a.report.lambda_max.log10_abs() - options.certify_below->log10_abs()) / std::log10(2.0) +
                          kTolerance.resolve + 1;
      if (need > next) next = std::min(numerics::kMaxBits, 64 * static_cast<int>(std::ceil(need / 64)));
    }
    bits = next;
  }
}

BigFloat control_energy(const LinearSystem& sys, int t, const GramianOptions& options) {
  require(t >= 1, ErrorKind::InvalidArgument, "control_energy: t must be >= 1");
  const GramianReport rep = gramian(sys, t - 1, options);
  if (!rep.resolved || rep.rank_deficient || !(rep.lambda_min > BigFloat(0))) return BigFloat::infinity();
  numerics::PrecisionScope scope(std::max(rep.precision_bits_used, numerics::kMinExtendedBits));
  return BigFloat(1) / rep.lambda_min;
}

namespace {

template <class R>
struct PseudoInverse {
  numerics::HermitianEigen<R> eig;
  R cutoff;
};

template <class R>
PseudoInverse<R> gramian_pinv(const LinearSystem& sys, int t_minus_1) {
  const CMatrix<R> s = controllability_matrix<R>(sys, t_minus_1);
  PseudoInverse<R> p{numerics::eig_hermitian(numerics::gram(s)), R(0)};
  p.cutoff = numerics::tolerance<R>(kTolerance.pinv_cutoff) * p.eig.values.back();
  return p;
}

template <class R>
CVector<R> apply_power(const CMatrix<R>& a, CVector<R> x, int times) {
  for (int i = 0; i < times; ++i) x = numerics::multiply(a, x);
  return x;
}

template <class R>
SteeringPlan steer_at(const LinearSystem& sys, const ComplexVector& x0, const ComplexVector& xf, int t) {
  using std::sqrt;
  const std::size_t n = sys.n();
  const CMatrix<R> a = numerics::widen<R>(sys.A());
  const CMatrix<R> b = numerics::widen<R>(sys.B());
  const CVector<R> x0w = numerics::widen<R>(x0);
  const CVector<R> xfw = numerics::widen<R>(xf);
  const CVector<R> drift = apply_power(a, x0w, t);
  CVector<R> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = xfw[i] - drift[i];

  const auto p = gramian_pinv<R>(sys, t - 1);
  CVector<R> w(n, Cx<R>(0));
  CVector<R> in_range(n, Cx<R>(0));
  for (std::size_t c = 0; c < n; ++c) {
    const R& lam = p.eig.values[c];
    if (!(lam > p.cutoff)) continue;
    Cx<R> coef(0);
    for (std::size_t i = 0; i < n; ++i) numerics::add_adjoint_product(coef, p.eig.vectors(i, c), r[i]);
    for (std::size_t i = 0; i < n; ++i) {
      numerics::add_product(in_range[i], p.eig.vectors(i, c), coef);
      numerics::add_product(w[i], p.eig.vectors(i, c), coef / lam);
    }
  }
  R outside(0);
  for (std::size_t i = 0; i < n; ++i) outside += numerics::norm2(r[i] - in_range[i]);
  outside = sqrt(outside);
  const R rnorm = numerics::vector_norm(r);
  const R range_tol = numerics::RealTraits<R>::pow2(kTolerance.pinv_cutoff - numerics::RealTraits<R>::bits() / 2);
  require(!(outside > range_tol * rnorm), ErrorKind::Unreachable,
          "steer: target lies outside the range of W(t-1) (relative residual " +
              std::to_string(numerics::to_double(rnorm > R(0) ? outside / rnorm : R(0))) + ")");

  SteeringPlan plan;
  plan.precision_bits = RealTraits<R>::bits();
  const CMatrix<R> a_adj = numerics::adjoint(a);
  const CMatrix<R> b_adj = numerics::adjoint(b);
  std::vector<CVector<R>> inputs(static_cast<std::size_t>(t));
  CVector<R> y = w;
  R energy(0);
  for (int j = 0; j < t; ++j) {
    CVector<R> u = numerics::multiply(b_adj, y);
    for (const auto& z : u) energy += numerics::norm2(z);
    inputs[static_cast<std::size_t>(t - 1 - j)] = std::move(u);
    if (j + 1 < t) y = numerics::multiply(a_adj, y);
  }
  const Cx<R> quad = numerics::dot(r, w);

  CVector<R> x = x0w;
  for (const auto& u : inputs) {
    CVector<R> nx = numerics::multiply(a, x);
    const CVector<R> bu = numerics::multiply(b, u);
    for (std::size_t i = 0; i < n; ++i) nx[i] += bu[i];
    x = std::move(nx);
  }
  R miss(0);
  for (std::size_t i = 0; i < n; ++i) miss += numerics::norm2(x[i] - xfw[i]);

  for (auto& u : inputs) plan.inputs.push_back(numerics::narrow(u));
  plan.energy = numerics::to_double(energy);
  plan.energy_exact = numerics::big_of<R>(energy);
  plan.quadratic_form = numerics::to_double(quad.re);
  plan.target_residual = numerics::to_double(sqrt(miss));
  return plan;
}

}  // namespace

SteeringPlan steer(const LinearSystem& sys, const ComplexVector& x0, const ComplexVector& xf, int t,
                   const GramianOptions& options) {
  require(t >= 1, ErrorKind::InvalidArgument, "steer: t must be >= 1");
  require(x0.size() == sys.n() && xf.size() == sys.n(), ErrorKind::DimensionMismatch, "steer: x0 and xf need n entries");
  const GramianReport rep = gramian(sys, t - 1, options);
  const int bits = std::min(std::max(2 * rep.precision_bits_used, 2 * numerics::kNativeBits), numerics::kMaxBits);
  numerics::PrecisionScope scope(bits);
  return steer_at<BigFloat>(sys, x0, xf, t);
}

WorstDirection worst_direction(const LinearSystem& sys, int t, const GramianOptions& options) {
  require(t >= 1, ErrorKind::InvalidArgument, "worst_direction: t must be >= 1");
  const GramianReport rep = gramian(sys, t - 1, options);
  require(rep.resolved && !rep.rank_deficient && rep.lambda_min > BigFloat(0), ErrorKind::Unreachable,
          "worst_direction: W(t-1) is singular, its null direction cannot be reached");
  const int bits = std::min(std::max(2 * rep.precision_bits_used, 2 * numerics::kNativeBits), numerics::kMaxBits);
  WorstDirection out;
  {
    numerics::PrecisionScope scope(bits);
    const CMatrix<BigFloat> s = controllability_matrix<BigFloat>(sys, t - 1);
    const auto eig = numerics::eig_hermitian(numerics::gram(s));
    CVector<BigFloat> y(sys.n());
    for (std::size_t i = 0; i < sys.n(); ++i) y[i] = eig.vectors(i, 0);
    out.y = numerics::narrow(y);
    out.inverse_lambda_min = (BigFloat(1) / eig.values.front()).to_double();
  }
  // Renormalise after rounding so y is a unit vector in binary64.
  double norm = numerics::vector_norm(out.y);
  for (auto& z : out.y) z /= norm;
  const ComplexVector zero(sys.n(), numerics::cplx(0));
  out.energy = steer(sys, zero, out.y, t, options).energy;
  out.precision_bits = bits;
  return out;
}

}  // namespace ctrlcap::gramian
