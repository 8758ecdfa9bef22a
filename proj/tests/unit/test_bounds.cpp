#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ctrlcap/bounds/bounds.hpp"
#include "ctrlcap/numerics/random.hpp"

using namespace ctrlcap;
using namespace ctrlcap::bounds;

TEST(Bounds, Thm1Formulas) {
  EXPECT_EQ(thm1_nonasymptotic(1, 1, 0), 0);
  EXPECT_DOUBLE_EQ(thm1_nonasymptotic(1, 1, 0.25), 0.0625);
  EXPECT_DOUBLE_EQ(thm1_nonasymptotic(10, 2, 0.5), 100.0);
  EXPECT_DOUBLE_EQ(thm1_capacity(1, 7, 3, 2), 36.0);
  const double c2 = std::sqrt(3.0) / std::numbers::pi;
  EXPECT_NEAR(thm1_capacity(std::sqrt(c2), 10, 1, 1), std::pow(c2, 10), 1e-18);
}

TEST(Bounds, Thm2Values) {
  const auto a = thm2(5000, 1, 99, 1);
  EXPECT_NEAR(a.t_quad, 4998.0 * 4998.0 / 99, 1e-6);
  EXPECT_GE(a.t_quad, 250000);
  EXPECT_NEAR(a.bound / 1.03e-37, 1, 0.02);
  const auto b = thm2(5000, 1, 24, 1);
  EXPECT_GE(b.t_quad, 1e6);
  EXPECT_NEAR(b.bound / 1.58e-4, 1, 0.02);
  // B_fro scales the bound quadratically, k divides m with ceiling.
  EXPECT_DOUBLE_EQ(thm2(5000, 1, 24, 3).bound, 9 * b.bound);
  EXPECT_DOUBLE_EQ(thm2(11, 2, 1, 1).t_quad, 16.0);
  try {
    thm2(4, 2, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolated);
  }
}

TEST(Bounds, Thm2DecreasingInQ) {
  for (int m : {10, 100, 5000})
    for (int k : {1, 2}) {
      double prev = thm2(m, k, 2.0, 1).bound;
      for (double q = 2.25; q <= 60; q += 0.25) {
        const double cur = thm2(m, k, q, 1).bound;
        EXPECT_LT(cur, prev) << m << " " << k << " " << q;
        prev = cur;
      }
    }
}

TEST(Bounds, Lemma2) {
  const auto a = lemma2_sum(10, 4);
  EXPECT_NEAR(a.closed_bound, 100 * std::exp(-4.0), 1e-12);
  EXPECT_EQ(a.upper_index, 25);
  ASSERT_TRUE(a.direct_sum.has_value());
  double oracle = 0;
  for (int n = 10; n <= 25; ++n) oracle += 4 * std::exp(-100.0 / n);
  EXPECT_NEAR(*a.direct_sum, oracle, 1e-12);
  EXPECT_LE(*a.direct_sum, a.closed_bound);
  EXPECT_NEAR(lemma2_sum(1, 1).closed_bound, 4 / std::numbers::e, 1e-12);
  const auto big = lemma2_sum(5000, 1);
  EXPECT_TRUE(big.desk_scale_exceeded);
  EXPECT_FALSE(big.direct_sum.has_value());
  EXPECT_NEAR(big.closed_bound, 1e8 / std::numbers::e, 1e-6);
}

TEST(Bounds, Lemma2ExactIsSmaller) {
  for (auto [m, q] : {std::pair{6, 1.0}, std::pair{10, 4.0}, std::pair{12, 2.0}}) {
    const auto v = lemma2_sum(m, q, true);
    ASSERT_TRUE(v.exact_sum.has_value());
    EXPECT_LE(*v.exact_sum, *v.direct_sum);
    EXPECT_LE(*v.direct_sum, v.closed_bound);
  }
}

TEST(Bounds, Lemma2ClosedDominatesDirect) {
  numerics::Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(60));
    const double q = rng.uniform(0.5, 12);
    const auto v = lemma2_sum(m, q);
    if (v.direct_sum) EXPECT_LE(*v.direct_sum, v.closed_bound * (1 + 1e-12)) << m << " " << q;
  }
}

TEST(Bounds, VerifyThm1Interval) {
  SystemSpec s;
  s.n = 12;
  s.k = 1;
  s.region = Region::interval(-0.5, 0.5);
  s.seed = 5;
  const auto v = verify_thm1(s, s.region);
  ASSERT_TRUE(v.report.holds.has_value());
  EXPECT_TRUE(*v.report.holds);
  EXPECT_FALSE(v.report.certified_only);
  ASSERT_TRUE(v.identities.has_value());
  EXPECT_TRUE(v.identities->all_ok()) << v.identities->identity_rel_error << " " << v.identities->rank_ratio;
  ASSERT_TRUE(v.capacity_indicator.has_value());
  EXPECT_TRUE(v.capacity_indicator->asymptotic_only);
  EXPECT_FALSE(v.capacity_indicator->holds.has_value());
  EXPECT_NEAR(*v.capacity_indicator->inputs.cap, 0.25, 1e-12);
}

TEST(Bounds, VerifyThm1Disk) {
  SystemSpec s;
  s.n = 8;
  s.k = 2;
  s.region = Region::disk({0, 0}, 0.8);
  s.target_cond_V = 10;
  s.seed = 2;
  const auto v = verify_thm1(s, s.region);
  EXPECT_TRUE(v.report.holds.value());
  EXPECT_EQ(*v.report.inputs.t, 3);
  // Unit-norm eigenvector columns can only lower the generator's cond.
  EXPECT_GT(v.cond_v, 1);
  EXPECT_LE(v.cond_v, 10 * (1 + 1e-9));
  EXPECT_TRUE(v.identities->all_ok());
  // Disk: Err(l) = r^l exactly.
  EXPECT_NEAR(v.err.error, std::pow(0.8, 3), 1e-6);
}

TEST(Bounds, VerifyThm1Defective) {
  try {
    verify_thm1_system(system::lower_shift_system(6), Region::disk({0, 0}, 0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Defective);
  }
}

TEST(Bounds, VerifyThm1RejectsEigenvaluesOutsideX) {
  SystemSpec s;
  s.n = 6;
  s.region = Region::disk({0, 0}, 0.9);
  try {
    verify_thm1(s, Region::disk({0, 0}, 0.1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Bounds, VerifyThm2) {
  SystemSpec s;
  s.n = 24;
  s.k = 1;
  s.hermitian = true;
  s.seed = 9;
  // (24 - 2)^2 / q >= 200 for q <= 2.42.
  const auto r = verify_thm2(s, 2.4, 200);
  EXPECT_TRUE(r.holds.value());
  EXPECT_LE(*r.ratio, 1);

  SystemSpec half = s;
  half.n = 30;
  half.stable_count = 15;
  const double q = 2;
  const int t = static_cast<int>(thm2(15, 1, q, 1).t_quad);
  EXPECT_TRUE(verify_thm2(half, q, t).holds.value());

  SystemSpec bad = s;
  bad.k = 2;
  bad.stable_count = 4;
  try {
    verify_thm2(bad, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolated);
  }
}

TEST(Bounds, RandomTrialsAreDeterministic) {
  const auto a = random_thm1_trial(17);
  const auto b = random_thm1_trial(17);
  EXPECT_EQ(a.spec.n, b.spec.n);
  EXPECT_EQ(a.region.to_spec(), b.region.to_spec());
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto t1 = random_thm1_trial(seed);
    EXPECT_GE(t1.spec.n, 4);
    EXPECT_LE(t1.spec.n, 30);
    const auto t2 = random_thm2_trial(seed);
    EXPECT_GT(*t2.spec.stable_count, 2 * t2.spec.k);
    EXPECT_LE(t2.t, thm2(*t2.spec.stable_count, t2.spec.k, t2.q, 1).t_quad);
    EXPECT_LE(t2.t, 2000);
  }
}

TEST(Bounds, SmallBatches) {
  const auto r1 = thm1_batch(100, 3, {}, 3);
  ASSERT_EQ(r1.size(), 3u);
  for (const auto& r : r1) {
    ASSERT_FALSE(r.error_kind.has_value()) << *r.error_kind << ": " << r.error_message;
    EXPECT_TRUE(r.report->holds.value());
    EXPECT_TRUE(r.identities->all_ok());
  }
  const auto r2 = thm2_batch(100, 3, {}, 3);
  for (const auto& r : r2) {
    ASSERT_FALSE(r.error_kind.has_value()) << *r.error_kind << ": " << r.error_message;
    EXPECT_TRUE(r.report->holds.value());
  }
}

TEST(Bounds, ConjectureScan) {
  const auto rows = conjecture_scan({4, 6}, {0.1, 1, 10}, 2, 3);
  ASSERT_EQ(rows.size(), 2u * 3 * 4);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.monotone);
    if (r.t < r.n - 1) EXPECT_EQ(r.lambda_min, 0) << r.n << " " << r.t;
  }
  // n = 4, t = 160 (10 n^2), Chebyshev nodes: positive.
  bool found = false;
  for (const auto& r : rows)
    if (r.n == 4 && r.placement == "chebyshev" && r.multiplier == 10) {
      found = true;
      EXPECT_GT(r.lambda_min, 0);
    }
  EXPECT_TRUE(found);
  // Deterministic under a different worker count.
  const auto again = conjecture_scan({4, 6}, {0.1, 1, 10}, 2, 3, 4);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].lambda_min, again[i].lambda_min);
}

TEST(Bounds, Reproduce) {
  const auto lines = reproduce();
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_NEAR(lines[0].recomputed, 0.13219, 1e-4);
  EXPECT_LE(lines[0].deviation, 0.01);
  EXPECT_NEAR(lines[1].recomputed, 0.5513, 1e-4);
  EXPECT_LE(lines[1].deviation, 0.002);
  EXPECT_NEAR(lines[2].recomputed, 1.0206e-37, 1e-40);
  EXPECT_LE(lines[2].deviation, 0.02);
  EXPECT_NEAR(lines[3].recomputed, 1.5717e-4, 1e-7);
  EXPECT_LE(lines[3].deviation, 0.02);
  EXPECT_FALSE(lines[0].note.empty());
}
