#include "ctrlcap/bounds/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "ctrlcap/capacity/capacity.hpp"
#include "ctrlcap/numerics/linalg.hpp"
#include "ctrlcap/numerics/parallel.hpp"
#include "ctrlcap/numerics/random.hpp"

namespace ctrlcap::bounds {

using numerics::CMatrix;
using numerics::CVector;
using numerics::Cx;
using numerics::ComplexMatrix;
using numerics::ComplexVector;
using system::LinearSystem;

namespace {

constexpr double kHoldsSlack = 1e-6;
constexpr int kThm1MaxN = 40;
constexpr int kThm2MaxN = 60;
constexpr int kThm2MaxT = 5000;
constexpr int kLemma2DirectMax = 5000;
constexpr int kLemma2ExactMax = 200;

void decide(BoundReport& r) {
  if (!r.empirical_value) return;
  numerics::PrecisionScope scope(std::max(r.empirical_value->precision(), numerics::kMinExtendedBits));
  const BigFloat limit = BigFloat(r.bound_value) * BigFloat(1 + kHoldsSlack);
  r.holds = *r.empirical_value <= limit;
  if (r.bound_value > 0 && *r.empirical_value > BigFloat(0))
    r.ratio = std::pow(10.0, r.empirical_value->log10_abs() - std::log10(r.bound_value));
  else if (r.bound_value > 0)
    r.ratio = 0.0;
}

BigFloat copy_at(const BigFloat& x, int bits) {
  numerics::PrecisionScope scope(bits);
  return numerics::to_big(x);
}

}  // namespace

std::string_view to_string(BoundName b) {
  switch (b) {
    case BoundName::Thm1Nonasymptotic: return "thm1_nonasymptotic";
    case BoundName::Thm1Capacity: return "thm1_capacity";
    case BoundName::Thm2: return "thm2";
    case BoundName::Lemma2Sum: return "lemma2_sum";
  }
  return "unknown";
}

double thm1_nonasymptotic(double cond_v, double b_fro, double err_tmin) {
  require(cond_v >= 0 && b_fro >= 0 && err_tmin >= 0, ErrorKind::InvalidArgument,
          "thm1_nonasymptotic: inputs must be nonnegative");
  return cond_v * cond_v * err_tmin * err_tmin * b_fro * b_fro;
}

double thm1_capacity(double cap, int t_min, double cond_v, double b_fro) {
  require(cap > 0 && t_min >= 1, ErrorKind::InvalidArgument, "thm1_capacity: needs cap > 0 and t_min >= 1");
  return cond_v * cond_v * b_fro * b_fro * std::pow(cap * cap, t_min);
}

Thm2Value thm2(int m, int k, double q, double b_fro) {
  require(k >= 1 && q > 0 && b_fro >= 0, ErrorKind::InvalidArgument, "thm2: needs k >= 1, q > 0, B_fro >= 0");
  require(m > 2 * k, ErrorKind::HypothesisViolated, "thm2: needs m > 2k");
  const double c = static_cast<double>((m + k - 1) / k - 2);
  Thm2Value v;
  v.t_quad = c * c / q;
  v.bound = 4 * v.t_quad * std::exp(-q) * b_fro * b_fro;
  return v;
}

double lemma2_closed(int m, double q) {
  require(m >= 1 && q > 0, ErrorKind::InvalidArgument, "lemma2: needs m >= 1 and q > 0");
  return 4.0 * m * m * std::exp(-q) / q;
}

Lemma2Value lemma2_sum(int m, double q, bool with_exact) {
  Lemma2Value v;
  v.closed_bound = lemma2_closed(m, q);
  const double top = std::floor(static_cast<double>(m) * m / q);
  v.upper_index = top > 1e9 ? 1000000000 : static_cast<int>(top);
  if (v.upper_index > kLemma2DirectMax) {
    v.desk_scale_exceeded = true;
    return v;
  }
  double direct = 0;
  for (int n = m; n <= v.upper_index; ++n) {
    const double phi = approx::phi_hoeffding(n, m);
    direct += phi * phi;
  }
  v.direct_sum = direct;
  if (with_exact) {
    require(m <= 40 && v.upper_index <= kLemma2ExactMax, ErrorKind::DeskScaleExceeded,
            "lemma2_sum: the exact sum needs m <= 40 and floor(m^2/q) <= 200");
    double exact = 0;
    for (int n = m; n <= v.upper_index; ++n) {
      const double e = approx::phi_exact(n, m).error;
      exact += e * e;
    }
    v.exact_sum = exact;
  }
  return v;
}

namespace {

struct HighDiag {
  CMatrix<BigFloat> v;  // V A V^-1 = diag(d)
  CVector<BigFloat> d;
};

// The general route even for Hermitian input: the stored A is Hermitian only
// to binary64 rounding, and V must diagonalize A itself at this precision.
HighDiag high_diagonalize(const ComplexMatrix& a) {
  auto eig = numerics::eig_general(numerics::widen<BigFloat>(a));
  HighDiag h;
  h.v = numerics::inverse(eig.vectors);
  h.d = std::move(eig.values);
  return h;
}

ProofIdentities check_identities(const LinearSystem& sys, int t, const HighDiag& h, double err_infl) {
  const std::size_t n = sys.n();
  const std::size_t k = sys.k();
  ProofIdentities out;
  out.precision_bits = numerics::working_precision();
  out.rank_budget = static_cast<int>(k) * t;

  // Q = V W V^* with W from the controllability matrix of A itself.
  const CMatrix<BigFloat> s = gramian::controllability_matrix<BigFloat>(sys, t);
  const CMatrix<BigFloat> w = numerics::gram(s);
  CMatrix<BigFloat> q = numerics::multiply(numerics::multiply(h.v, w), numerics::adjoint(h.v));
  for (std::size_t i = 0; i < n; ++i) {
    q(i, i).im = BigFloat(0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Cx<BigFloat> avg = (q(i, j) + numerics::conj(q(j, i))) * BigFloat(0.5);
      q(i, j) = avg;
      q(j, i) = numerics::conj(avg);
    }
  }
  const BigFloat lambda_q = numerics::eig_hermitian(q, false).values.front();

  // S_Z = [Z, DZ, ..., D^t Z] and its companion L, built from D and Z = V B only.
  const CMatrix<BigFloat> z = numerics::multiply(h.v, numerics::widen<BigFloat>(sys.B()));
  const std::size_t cols = k * static_cast<std::size_t>(t + 1);
  CMatrix<BigFloat> sz(n, cols);
  CMatrix<BigFloat> l(n, cols);
  for (std::size_t i = 0; i < k; ++i) {
    CMatrix<BigFloat> basis(n, static_cast<std::size_t>(t));
    CVector<BigFloat> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = z(r, i);
    for (int j = 0; j <= t; ++j) {
      const std::size_t c = static_cast<std::size_t>(j) * k + i;
      for (std::size_t r = 0; r < n; ++r) sz(r, c) = col[r];
      if (j < t) {
        for (std::size_t r = 0; r < n; ++r) {
          basis(r, static_cast<std::size_t>(j)) = col[r];
          l(r, c) = col[r];
        }
      }
      if (j < t)
        for (std::size_t r = 0; r < n; ++r) col[r] = h.d[r] * col[r];
    }
    const std::size_t last = static_cast<std::size_t>(t) * k + i;
    if (t > 0) {
      const auto ls = numerics::least_squares(basis, col);
      const CVector<BigFloat> proj = numerics::multiply(basis, ls.coefficients);
      for (std::size_t r = 0; r < n; ++r) l(r, last) = proj[r];
    }
  }
  const auto sv = numerics::svd(numerics::adjoint(sz));
  const BigFloat sigma_n = sv.values[n - 1];
  const BigFloat sigma_sq = sigma_n * sigma_n;
  const BigFloat diff = numerics::frobenius_norm(numerics::subtract(sz, l));
  const auto lv = numerics::svd(numerics::adjoint(l));
  const BigFloat v_norm = numerics::svd(h.v).values.front();

  out.lambda_min_q = lambda_q.to_double();
  out.sigma_n_sz_squared = sigma_sq.to_double();
  out.sigma_n_s = sigma_n.to_double();
  out.s_minus_l = diff.to_double();
  const BigFloat rel = sigma_sq > BigFloat(0) ? abs(lambda_q - sigma_sq) / sigma_sq : abs(lambda_q);
  out.identity_rel_error = rel.to_double();
  out.identity_ok = rel <= BigFloat(1e-6);
  out.sigma_ok = sigma_n <= diff * BigFloat(1 + 1e-12);
  const BigFloat rhs = BigFloat(err_infl) * BigFloat(err_infl) * v_norm * v_norm * BigFloat(sys.b_fro()) *
                       BigFloat(sys.b_fro());
  out.sbound_rhs = rhs.to_double();
  out.sbound_ok = diff * diff <= rhs * BigFloat(1 + kHoldsSlack);
  const BigFloat top = lv.values.front();
  const BigFloat ratio = top > BigFloat(0) ? lv.values[n - 1] / top : BigFloat(0);
  out.rank_ratio = ratio.to_double();
  out.rank_ok = out.rank_budget < static_cast<int>(n) &&
                ratio <= numerics::RealTraits<BigFloat>::pow2(-numerics::working_precision() / 2);
  return out;
}

}  // namespace

Thm1Verification verify_thm1_system(const system::LinearSystem& sys, const Region& x, const VerifyOptions& options) {
  const int n = static_cast<int>(sys.n());
  const int k = static_cast<int>(sys.k());
  require(n <= kThm1MaxN, ErrorKind::DeskScaleExceeded, "verify_thm1: n must be <= 40");
  const system::Diagonalization diag = system::diagonalize(sys.A());
  for (const auto& lambda : diag.eigenvalues)
    require(x.contains(numerics::to_std(lambda), 1e-7), ErrorKind::InvalidArgument,
            "verify_thm1: an eigenvalue of A lies outside X");

  Thm1Verification out;
  out.cond_v = diag.cond_V;
  out.hermitian = diag.hermitian;
  const int tm = system::t_min(n, k);
  double err_infl = 1;  // Err(0, X) = 1: nothing approximates z^0
  if (tm >= 1) {
    out.err = approx::err_region(tm, x, options.err);
    err_infl = out.err.error + out.err.certified_gap;
  } else {
    out.err.l = 0;
    out.err.error = 1;
  }

  BoundReport& r = out.report;
  r.bound_name = BoundName::Thm1Nonasymptotic;
  r.bound_value = thm1_nonasymptotic(diag.cond_V, sys.b_fro(), err_infl);
  r.inputs.cond_V = diag.cond_V;
  r.inputs.b_fro = sys.b_fro();
  r.inputs.err = out.err.error;
  r.inputs.err_gap = out.err.certified_gap;
  r.inputs.n = n;
  r.inputs.k = k;
  r.inputs.t = tm;

  gramian::GramianOptions gopt = options.gramian;
  gopt.certify_below.reset();
  out.gramian = gramian::gramian(sys, tm, gopt);
  if (!out.gramian.resolved && gopt.auto_escalate) {
    gopt.certify_below = BigFloat(r.bound_value * (1 + kHoldsSlack));
    gopt.precision_bits = out.gramian.precision_bits_used;
    out.gramian = gramian::gramian(sys, tm, gopt);
  }
  require(out.gramian.resolved || out.gramian.certified_below, ErrorKind::Unresolved,
          "verify_thm1: lambda_min(W(t_min)) could not be resolved");
  r.precision_bits = out.gramian.precision_bits_used;
  if (out.gramian.resolved) {
    r.empirical_value = out.gramian.lambda_min;
  } else {
    r.empirical_value = out.gramian.lambda_min_upper;
    r.certified_only = true;
  }
  decide(r);

  if (options.check_identities) {
    const int bits = std::min(numerics::kMaxBits, std::max(256, 2 * out.gramian.precision_bits_used));
    numerics::PrecisionScope scope(bits);
    const HighDiag h = high_diagonalize(sys.A());
    out.identities = check_identities(sys, tm, h, err_infl);
  }

  if (options.capacity_points > 0 && tm >= 1) {
    const auto cap = capacity::capacity(x, options.capacity_points);
    if (cap.value > 0) {
      BoundReport c;
      c.bound_name = BoundName::Thm1Capacity;
      c.bound_value = thm1_capacity(cap.value, tm, diag.cond_V, sys.b_fro());
      c.inputs = r.inputs;
      c.inputs.cap = cap.value;
      c.empirical_value = r.empirical_value;
      c.precision_bits = r.precision_bits;
      c.asymptotic_only = true;
      if (c.bound_value > 0 && *c.empirical_value > BigFloat(0))
        c.ratio = std::pow(10.0, c.empirical_value->log10_abs() - std::log10(c.bound_value));
      out.capacity_indicator = c;
    }
  }
  return out;
}

Thm1Verification verify_thm1(const SystemSpec& spec, const Region& x, const VerifyOptions& options) {
  require(spec.n <= kThm1MaxN, ErrorKind::DeskScaleExceeded, "verify_thm1: n must be <= 40");
  const auto gen = system::generate_with_structure(spec);
  Thm1Verification v = verify_thm1_system(gen.system, x, options);
  v.report.inputs.seed = spec.seed;
  if (v.capacity_indicator) v.capacity_indicator->inputs.seed = spec.seed;
  return v;
}

BoundReport verify_thm2(const SystemSpec& spec, double q, int t, const VerifyOptions& options) {
  require(spec.hermitian, ErrorKind::InvalidArgument, "verify_thm2: the system must be Hermitian");
  const int m = spec.stable_count.value_or(spec.n);
  const Thm2Value v = thm2(m, spec.k, q, spec.b_fro);
  require(t >= 0 && t <= v.t_quad, ErrorKind::InvalidArgument, "verify_thm2: needs 0 <= t <= t_quad");
  require(spec.n <= kThm2MaxN && t <= kThm2MaxT, ErrorKind::DeskScaleExceeded,
          "verify_thm2: desk scale is n <= 60 and t <= 5000");
  const auto sys = system::generate(spec);

  BoundReport r;
  r.bound_name = BoundName::Thm2;
  r.bound_value = v.bound;
  r.inputs.b_fro = sys.b_fro();
  r.inputs.q = q;
  r.inputs.n = spec.n;
  r.inputs.m = m;
  r.inputs.k = spec.k;
  r.inputs.t = t;
  r.inputs.seed = spec.seed;

  gramian::GramianOptions gopt = options.gramian;
  gopt.certify_below = BigFloat(v.bound * (1 + kHoldsSlack));
  const auto rep = gramian::gramian(sys, t, gopt);
  require(rep.resolved || rep.certified_below, ErrorKind::Unresolved,
          "verify_thm2: lambda_min(W(t)) could not be resolved");
  r.precision_bits = rep.precision_bits_used;
  if (rep.resolved) {
    r.empirical_value = rep.lambda_min;
  } else {
    r.empirical_value = rep.lambda_min_upper;
    r.certified_only = true;
  }
  decide(r);
  return r;
}

Thm1Trial random_thm1_trial(std::uint64_t seed) {
  numerics::Rng rng(seed, 0x7431);
  Thm1Trial trial;
  SystemSpec& s = trial.spec;
  s.n = 4 + static_cast<int>(rng.below(27));
  s.k = 1 + static_cast<int>(rng.below(3));
  const double conds[] = {1, 10, 100};
  s.target_cond_V = conds[rng.below(3)];
  switch (rng.below(3)) {
    case 0: {
      const double c = rng.uniform(-0.5, 0.5);
      const double h = rng.uniform(0.1, 0.9);
      trial.region = Region::interval(c - h, c + h);
      break;
    }
    case 1: {
      const double r = rng.uniform(0.1, 0.9);
      trial.region = Region::disk({rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)}, r);
      break;
    }
    default:
      trial.region = capacity::random_unit_area_polygon(rng, 3 + static_cast<int>(rng.below(6)));
  }
  s.region = trial.region;
  s.seed = seed;
  return trial;
}

Thm2Trial random_thm2_trial(std::uint64_t seed) {
  numerics::Rng rng(seed, 0x7432);
  Thm2Trial trial;
  SystemSpec& s = trial.spec;
  s.n = 6 + static_cast<int>(rng.below(55));
  s.k = 1 + static_cast<int>(rng.below(2));
  const int lo = 2 * s.k + 1;
  s.stable_count = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(s.n - lo + 1)));
  const double qs[] = {2, 4, 8};
  trial.q = qs[rng.below(3)];
  s.hermitian = true;
  s.region = Region::interval(-1, 1);
  s.seed = seed;
  const double tq = thm2(*s.stable_count, s.k, trial.q, s.b_fro).t_quad;
  trial.t = static_cast<int>(std::min(std::floor(tq), 2000.0));
  return trial;
}

namespace {

template <class Fn>
std::vector<TrialResult> run_batch(std::uint64_t first_seed, int count, int jobs, Fn&& fn) {
  require(count >= 0, ErrorKind::InvalidArgument, "batch: trial count must be nonnegative");
  std::vector<TrialResult> out(static_cast<std::size_t>(count));
  numerics::parallel_for(out.size(), jobs, [&](std::size_t i) {
    TrialResult& r = out[i];
    r.seed = first_seed + i;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(r);
    } catch (const Error& e) {
      r.error_kind = std::string(to_string(e.kind()));
      r.error_message = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return out;
}

}  // namespace

std::vector<TrialResult> thm1_batch(std::uint64_t first_seed, int count, const VerifyOptions& options, int jobs) {
  return run_batch(first_seed, count, jobs, [&](TrialResult& r) {
    const Thm1Trial trial = random_thm1_trial(r.seed);
    r.n = trial.spec.n;
    r.k = trial.spec.k;
    r.t = system::t_min(r.n, r.k);
    r.region = trial.region.to_spec();
    r.cond_target = trial.spec.target_cond_V;
    VerifyOptions o = options;
    o.capacity_points = 0;
    auto v = verify_thm1(trial.spec, trial.region, o);
    r.report = std::move(v.report);
    r.identities = v.identities;
  });
}

std::vector<TrialResult> thm2_batch(std::uint64_t first_seed, int count, const VerifyOptions& options, int jobs) {
  return run_batch(first_seed, count, jobs, [&](TrialResult& r) {
    const Thm2Trial trial = random_thm2_trial(r.seed);
    r.n = trial.spec.n;
    r.k = trial.spec.k;
    r.t = trial.t;
    r.m = trial.spec.stable_count;
    r.q = trial.q;
    r.region = trial.spec.region.to_spec();
    r.report = verify_thm2(trial.spec, trial.q, trial.t, options);
  });
}

std::vector<ConjectureRow> conjecture_scan(const std::vector<int>& n_list, const std::vector<double>& t_multipliers,
                                           int trials, std::uint64_t seed, int jobs) {
  require(trials >= 1, ErrorKind::InvalidArgument, "conjecture_scan: trials must be >= 1");
  for (int n : n_list)
    require(n >= 1 && n <= kThm2MaxN, ErrorKind::DeskScaleExceeded, "conjecture_scan: n must lie in [1, 60]");
  for (double mult : t_multipliers)
    require(mult >= 0 && mult <= 20, ErrorKind::DeskScaleExceeded, "conjecture_scan: t must be <= 20 n^2");
  std::vector<double> mults = t_multipliers;
  std::sort(mults.begin(), mults.end());
  mults.erase(std::unique(mults.begin(), mults.end()), mults.end());
  static const char* const kPlacements[] = {"chebyshev", "equispaced", "random"};

  struct Job {
    int n;
    int placement;
    int trial;
  };
  std::vector<Job> jobs_list;
  for (int n : n_list)
    for (int p = 0; p < 3; ++p)
      for (int tr = 0; tr < trials; ++tr) jobs_list.push_back({n, p, tr});

  // Per job: lambda_min for each multiplier, and whether the sequence is monotone.
  std::vector<std::vector<BigFloat>> values(jobs_list.size());
  std::vector<bool> monotone(jobs_list.size(), true);
  numerics::parallel_for(jobs_list.size(), jobs, [&](std::size_t j) {
    const Job& job = jobs_list[j];
    const std::size_t n = static_cast<std::size_t>(job.n);
    numerics::Rng rng(seed, (static_cast<std::uint64_t>(job.n) << 32) ^ (static_cast<std::uint64_t>(job.placement) << 24) ^
                                static_cast<std::uint64_t>(job.trial));
    ComplexVector eig(n);
    for (std::size_t i = 0; i < n; ++i) {
      double lambda = 0;
      if (job.placement == 0)
        lambda = std::cos((2.0 * i + 1) * std::numbers::pi / (2.0 * n));
      else if (job.placement == 1)
        lambda = n == 1 ? 0.0 : -1.0 + 2.0 * i / (n - 1.0);
      else
        lambda = rng.uniform(-1, 1);
      eig[i] = numerics::cplx(lambda);
    }
    const ComplexMatrix u = system::random_unitary(rng, n);
    ComplexMatrix a = numerics::multiply(numerics::multiply(u, numerics::diagonal_matrix(eig)), numerics::adjoint(u));
    for (std::size_t i = 0; i < n; ++i) {
      a(i, i).im = 0;
      for (std::size_t c = i + 1; c < n; ++c) {
        const numerics::cplx avg = (a(i, c) + numerics::conj(a(c, i))) / 2.0;
        a(i, c) = avg;
        a(c, i) = numerics::conj(avg);
      }
    }
    ComplexMatrix b(n, 1);
    double norm = 0;
    for (auto& z : b.data()) {
      z = numerics::from_std(rng.complex_normal());
      norm += numerics::norm2(z);
    }
    for (auto& z : b.data()) z /= std::sqrt(norm);
    const LinearSystem sys(std::move(a), std::move(b));
    for (double mult : mults) {
      const int t = static_cast<int>(std::llround(mult * job.n * job.n));
      const auto rep = gramian::gramian(sys, t);
      values[j].push_back(copy_at(rep.rank_deficient ? BigFloat(0) : rep.lambda_min, 128));
    }
    numerics::PrecisionScope scope(128);
    for (std::size_t i = 1; i < values[j].size(); ++i)
      if (values[j][i] < values[j][i - 1] * BigFloat(1 - 1e-9)) monotone[j] = false;
  });

  std::vector<ConjectureRow> rows;
  numerics::PrecisionScope scope(128);
  for (int n : n_list) {
    for (std::size_t mi = 0; mi < mults.size(); ++mi) {
      BigFloat overall(0);
      bool overall_mono = true;
      for (int p = 0; p <= 3; ++p) {
        BigFloat best(0);
        bool mono = true;
        for (std::size_t j = 0; j < jobs_list.size(); ++j) {
          if (jobs_list[j].n != n || (p < 3 && jobs_list[j].placement != p)) continue;
          if (values[j][mi] > best) best = values[j][mi];
          mono = mono && monotone[j];
        }
        if (p < 3) {
          if (best > overall) overall = best;
          overall_mono = overall_mono && mono;
        }
        ConjectureRow row;
        row.n = n;
        row.multiplier = mults[mi];
        row.t = static_cast<int>(std::llround(mults[mi] * n * n));
        row.placement = p < 3 ? kPlacements[p] : "max";
        row.lambda_min = best.to_double();
        row.log10_lambda_min = best.log10_abs();
        row.monotone = mono;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<ReproLine> reproduce() {
  std::vector<ReproLine> lines;
  auto add = [&](std::string label, double stated, double value, std::string note) {
    lines.push_back({std::move(label), stated, value, std::abs(value - stated) / stated, std::move(note)});
  };
  const double tri = capacity::stated_triangle_constant() * 2;
  const double ngon = capacity::ngon_constant(3) * 2;
  add("triangle side 2: cap^2 decay constant", 0.133, tri * tri,
      "arithmetic from the stated constant Gamma(1/3)^2/(4 pi^2) = 0.18179 per unit side; the n-gon formula gives "
      "cap = 0.42175 per unit side, i.e. cap^2 = " +
          std::to_string(ngon * ngon) +
          ", and any set of area sqrt(3) has cap^2 >= sqrt(3)/pi = 0.5513, so 0.133 is not attainable");
  add("area-matched disk: cap^2 decay constant", 0.552, std::sqrt(3.0) / std::numbers::pi,
      "disk of area sqrt(3) (the triangle's area): r^2 = sqrt(3)/pi");
  const auto a = thm2(5000, 1, 99, 1);
  add("thm2 m=5000 k=1 q=99: bound on lambda_min(W(250000))", 1.03e-37, a.bound,
      "t_quad = " + std::to_string(a.t_quad) + " >= 250000; formula evaluation only");
  const auto b = thm2(5000, 1, 24, 1);
  add("thm2 m=5000 k=1 q=24: bound on lambda_min(W(1000000))", 1.58e-4, b.bound,
      "t_quad = " + std::to_string(b.t_quad) + " >= 1000000; formula evaluation only");
  return lines;
}

}  // namespace ctrlcap::bounds
