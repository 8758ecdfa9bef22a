#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctrlcap/approx/approx.hpp"
#include "ctrlcap/capacity/region.hpp"
#include "ctrlcap/gramian/gramian.hpp"
#include "ctrlcap/system/system.hpp"

namespace ctrlcap::bounds {

using capacity::Region;
using numerics::BigFloat;
using system::SystemSpec;

enum class BoundName { Thm1Nonasymptotic, Thm1Capacity, Thm2, Lemma2Sum };
std::string_view to_string(BoundName b);

/// Inputs that went into a bound, whichever apply.
struct InputsDigest {
  std::optional<double> cond_V, b_fro, q, err, err_gap, cap;
  std::optional<int> n, t, m, k;
  std::optional<std::uint64_t> seed;
};

struct BoundReport {
  BoundName bound_name = BoundName::Thm1Nonasymptotic;
  double bound_value = 0;
  std::optional<BigFloat> empirical_value;  // lambda_min, or its certified upper bound
  std::optional<double> ratio;              // empirical / bound
  InputsDigest inputs;
  std::optional<bool> holds;
  bool asymptotic_only = false;  // capacity indicator: not a certified bound
  bool certified_only = false;   // empirical_value is an upper bound, lambda_min not resolved
  int precision_bits = 53;
};

/// cond_V^2 err^2 B_fro^2.
double thm1_nonasymptotic(double cond_v, double b_fro, double err_tmin);

/// cond_V^2 B_fro^2 (cap^2)^t_min, the o(1) -> 0 indicator.
double thm1_capacity(double cap, int t_min, double cond_v, double b_fro);

struct Thm2Value {
  double t_quad = 0;
  double bound = 0;
};

/// t_quad = (ceil(m/k) - 2)^2 / q, bound = 4 t_quad e^(-q) B_fro^2. Throws
/// HypothesisViolated for m <= 2k.
Thm2Value thm2(int m, int k, double q, double b_fro);

struct Lemma2Value {
  double closed_bound = 0;                // 4 m^2 e^(-q) / q
  std::optional<double> direct_sum;       // sum_{n=m}^{floor(m^2/q)} (2 e^(-m^2/(2n)))^2
  std::optional<double> exact_sum;        // same with Phi_{n,m} from phi_exact (when requested)
  int upper_index = 0;                    // floor(m^2/q)
  bool desk_scale_exceeded = false;       // upper_index > 5000: direct sum skipped
};

/// The direct sum is skipped (desk_scale_exceeded) past floor(m^2/q) = 5000;
/// the exact sum needs floor(m^2/q) <= 200 and m <= 40.
Lemma2Value lemma2_sum(int m, double q, bool with_exact = false);

/// closed_bound without the desk-scale direct sum.
double lemma2_closed(int m, double q);

/// Intermediate quantities behind the region bound for one system.
struct ProofIdentities {
  int precision_bits = 0;
  double lambda_min_q = 0;          // lambda_min(V W V^*)
  double sigma_n_sz_squared = 0;    // sigma_n([Z, DZ, ..., D^t Z])^2
  double identity_rel_error = 0;
  double sigma_n_s = 0;             // sigma_n(S_Z)
  double s_minus_l = 0;             // ||S_Z - L||_F
  double sbound_rhs = 0;            // Err^2 ||V||_2^2 ||B||_F^2
  double rank_ratio = 0;            // sigma_n(L) / sigma_1(L)
  int rank_budget = 0;              // k t_min
  bool identity_ok = false;         // relative 1e-6
  bool sigma_ok = false;            // sigma_n(S_Z) <= ||S_Z - L||_F
  bool sbound_ok = false;           // ||S_Z - L||_F^2 <= Err^2 ||V||^2 ||B||_F^2
  bool rank_ok = false;             // k t_min < n and sigma_n(L) negligible
  bool all_ok() const { return identity_ok && sigma_ok && sbound_ok && rank_ok; }
};

struct VerifyOptions {
  gramian::GramianOptions gramian;
  approx::ErrOptions err;
  bool check_identities = true;
  int capacity_points = 24;  // Fekete n_max for the indicator; 0 skips it
};

struct Thm1Verification {
  BoundReport report;
  std::optional<BoundReport> capacity_indicator;
  approx::MinimaxResult err;
  gramian::GramianReport gramian;
  std::optional<ProofIdentities> identities;
  double cond_v = 1;
  bool hermitian = false;
};

/// Region bound on a given system. Eigenvalues must lie in X (checked), n <= 40.
/// Throws Defective when A is not diagonalizable.
Thm1Verification verify_thm1_system(const system::LinearSystem& sys, const Region& x, const VerifyOptions& options = {});

/// Generates the system from spec and verifies the region bound on X.
Thm1Verification verify_thm1(const SystemSpec& spec, const Region& x, const VerifyOptions& options = {});

/// Hermitian bound for a generated Hermitian system at time t <= t_quad.
BoundReport verify_thm2(const SystemSpec& spec, double q, int t, const VerifyOptions& options = {});

/// One trial of a batch run; error_kind is set instead of the reports when
/// the trial failed.
struct TrialResult {
  std::uint64_t seed = 0;
  int n = 0, k = 0, t = 0;
  std::string region;
  double cond_target = 1;
  std::optional<int> m;
  std::optional<double> q;
  std::optional<BoundReport> report;
  std::optional<ProofIdentities> identities;
  std::optional<std::string> error_kind;
  std::string error_message;
  double seconds = 0;
};

/// Random region-bound setting: n in [4, 30], k in {1, 2, 3}, X an interval, a
/// disk of radius <= 0.9 or an area-1 polygon, cond(V) target in {1, 10, 100}.
struct Thm1Trial {
  SystemSpec spec;
  Region region = Region::interval(-1, 1);
};
Thm1Trial random_thm1_trial(std::uint64_t seed);

/// Random Hermitian-bound setting: n in [6, 60], m in (2k, n], k in {1, 2},
/// q in {2, 4, 8}, t = min(floor(t_quad), 2000).
struct Thm2Trial {
  SystemSpec spec;
  double q = 2;
  int t = 0;
};
Thm2Trial random_thm2_trial(std::uint64_t seed);

/// Runs the trials for seeds first_seed .. first_seed + count - 1 on `jobs`
/// workers; results are in seed order.
std::vector<TrialResult> thm1_batch(std::uint64_t first_seed, int count, const VerifyOptions& options = {}, int jobs = 1);
std::vector<TrialResult> thm2_batch(std::uint64_t first_seed, int count, const VerifyOptions& options = {}, int jobs = 1);

struct ConjectureRow {
  int n = 0;
  double multiplier = 0;
  int t = 0;
  std::string placement;     // chebyshev, equispaced, random, or "max"
  double lambda_min = 0;     // max over trials for this placement
  double log10_lambda_min = 0;
  bool monotone = true;      // lambda_min(W(t)) nondecreasing along the multipliers
};

/// Exploratory scan for the tightness conjecture: symmetric A with
/// eigenvalues in [-1, 1], single random unit input.
std::vector<ConjectureRow> conjecture_scan(const std::vector<int>& n_list, const std::vector<double>& t_multipliers,
                                           int trials, std::uint64_t seed, int jobs = 1);

struct ReproLine {
  std::string label;
  double stated_value = 0;
  double recomputed = 0;
  double deviation = 0;  // |recomputed - stated| / stated
  std::string note;
};

/// The four numbers of the introduction, recomputed from the formulas.
std::vector<ReproLine> reproduce();

}  // namespace ctrlcap::bounds
