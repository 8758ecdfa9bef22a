#include <gtest/gtest.h>

#include <cmath>

#include "ctrlcap/gramian/gramian.hpp"
#include "ctrlcap/numerics/linalg.hpp"
#include "ctrlcap/system/system.hpp"

using namespace ctrlcap;
using namespace ctrlcap::numerics;
using namespace ctrlcap::system;
using namespace ctrlcap::gramian;
using capacity::Region;

namespace {

LinearSystem scalar(double a, double b = 1.0) {
  return LinearSystem(ComplexMatrix{{cplx(a)}}, ComplexMatrix{{cplx(b)}});
}

double residual_vav(const Diagonalization& d, const ComplexMatrix& a) {
  ComplexMatrix lhs = multiply(multiply(d.V, a), inverse(d.V));
  return max_abs(subtract(lhs, diagonal_matrix(d.eigenvalues)));
}

}  // namespace

TEST(System, TMin) {
  EXPECT_EQ(t_min(4, 1), 3);
  EXPECT_EQ(t_min(10000, 1), 9999);
  EXPECT_EQ(t_min(5, 2), 2);
  EXPECT_EQ(t_min(6, 3), 1);
  EXPECT_THROW(t_min(2, 3), Error);
}

TEST(System, DiagonalizeDiagonal) {
  ComplexMatrix a{{cplx(1), cplx(0), cplx(0)}, {cplx(0), cplx(2), cplx(0)}, {cplx(0), cplx(0), cplx(3)}};
  auto d = diagonalize(a);
  EXPECT_NEAR(d.cond_V, 1.0, 1e-14);
  EXPECT_NEAR(d.eigenvalues[0].re, 1.0, 1e-14);
  EXPECT_NEAR(d.eigenvalues[2].re, 3.0, 1e-14);
}

TEST(System, DiagonalizeHermitianSwap) {
  ComplexMatrix a{{cplx(0), cplx(1)}, {cplx(1), cplx(0)}};
  auto d = diagonalize(a);
  EXPECT_TRUE(d.hermitian);
  EXPECT_NEAR(d.eigenvalues[0].re, -1.0, 1e-14);
  EXPECT_NEAR(d.eigenvalues[1].re, 1.0, 1e-14);
  EXPECT_NEAR(d.cond_V, 1.0, 0);
  EXPECT_LT(residual_vav(d, a), 1e-14);
}

TEST(System, DiagonalizeJordanIsDefective) {
  ComplexMatrix a{{cplx(0), cplx(0)}, {cplx(1), cplx(0)}};
  try {
    diagonalize(a);
    FAIL() << "expected Defective";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Defective);
  }
}

TEST(System, GenerateSingletonHermitian) {
  SystemSpec spec;
  spec.n = 3;
  spec.k = 1;
  spec.region = Region::point({0.5, 0});
  spec.hermitian = true;
  spec.seed = 4;
  auto sys = generate(spec);
  auto d = diagonalize(sys.A());
  for (const auto& z : d.eigenvalues) EXPECT_NEAR(z.re, 0.5, 1e-12);
  EXPECT_NEAR(sys.b_fro(), 1.0, 1e-14);
}

TEST(System, GenerateDiskWithConditioning) {
  SystemSpec spec;
  spec.n = 8;
  spec.k = 1;
  spec.region = Region::disk(0, 0.9);
  spec.target_cond_V = 10;
  spec.seed = 17;
  auto g = generate_with_structure(spec);
  auto d = diagonalize(g.system.A());
  for (const auto& z : d.eigenvalues) EXPECT_LE(abs(z), 0.9 + 1e-10);
  EXPECT_NEAR(cond2(g.V), 10.0, 1e-9);
  // Normalised eigenvector matrices are the best conditioned up to a factor sqrt(n).
  EXPECT_GE(d.cond_V, 1.0);
  EXPECT_LE(d.cond_V, 20.0 * std::sqrt(8.0));
  EXPECT_LT(residual_vav(d, g.system.A()), 1e-10 * d.cond_V);
}

TEST(System, GenerateIsDeterministic) {
  SystemSpec spec;
  spec.n = 5;
  spec.k = 2;
  spec.region = Region::disk(0, 0.5);
  spec.target_cond_V = 3;
  spec.seed = 99;
  auto a = generate(spec), b = generate(spec);
  EXPECT_EQ(a.A().data(), b.A().data());
  EXPECT_EQ(a.B().data(), b.B().data());
  spec.seed = 100;
  EXPECT_NE(generate(spec).A().data(), a.A().data());
}

TEST(System, GenerateInfeasible) {
  SystemSpec spec;
  spec.n = 4;
  spec.hermitian = true;
  spec.region = Region::disk(0, 0.5);
  EXPECT_THROW(generate(spec), Error);
  spec.region = Region::interval(-3, 3);
  EXPECT_THROW(generate(spec), Error);
  spec.region = Region::interval(-1, 1);
  spec.target_cond_V = 2;
  EXPECT_THROW(generate(spec), Error);
}

TEST(System, HermitianGeneratorProperties) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SystemSpec spec;
    spec.n = 6 + static_cast<int>(seed);
    spec.region = Region::interval(-1, 1);
    spec.hermitian = true;
    spec.stable_count = 3;
    spec.seed = seed;
    auto g = generate_with_structure(spec);
    EXPECT_TRUE(is_hermitian(g.system.A()));
    auto d = diagonalize(g.system.A());
    std::vector<double> want, got;
    for (auto z : g.eigenvalues) want.push_back(z.re);
    for (auto z : d.eigenvalues) got.push_back(z.re);
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-10);
    int stable = 0;
    for (double v : want) {
      EXPECT_LE(std::abs(v), 2.0);
      if (std::abs(v) <= 1) ++stable;
    }
    EXPECT_EQ(stable, 3);
  }
}

TEST(System, SimulateExamples) {
  auto s = scalar(0);
  auto x = simulate(s, {cplx(0)}, {{cplx(1)}});
  EXPECT_EQ(x[0].re, 1.0);
  auto shift = lower_shift_system(3);
  auto y = simulate(shift, {cplx(0), cplx(0), cplx(0)}, {{cplx(1)}, {cplx(0)}, {cplx(0)}});
  EXPECT_EQ(y[0].re, 0.0);
  EXPECT_EQ(y[1].re, 0.0);
  EXPECT_EQ(y[2].re, 1.0);
  EXPECT_THROW(simulate(shift, {cplx(0)}, {}), Error);
}

TEST(System, SimulateSuperposition) {
  SystemSpec spec;
  spec.n = 5;
  spec.k = 2;
  spec.region = Region::disk(0, 0.9);
  spec.seed = 3;
  auto sys = generate(spec);
  Rng rng(1);
  auto rv = [&](std::size_t len) {
    ComplexVector v(len);
    for (auto& z : v) z = from_std(rng.complex_normal());
    return v;
  };
  ComplexVector x1 = rv(5), x2 = rv(5);
  std::vector<ComplexVector> u1, u2, u12;
  for (int i = 0; i < 7; ++i) {
    u1.push_back(rv(2));
    u2.push_back(rv(2));
    ComplexVector s(2);
    for (int j = 0; j < 2; ++j) s[j] = u1.back()[j] * 2.0 + u2.back()[j] * -3.0;
    u12.push_back(s);
  }
  ComplexVector x12(5);
  for (int i = 0; i < 5; ++i) x12[i] = x1[i] * 2.0 + x2[i] * -3.0;
  auto a = simulate(sys, x1, u1), b = simulate(sys, x2, u2), c = simulate(sys, x12, u12);
  for (int i = 0; i < 5; ++i) EXPECT_LT(abs(c[i] - (a[i] * 2.0 + b[i] * -3.0)), 1e-12 * (1 + abs(c[i])));
}

TEST(Gramian, ScalarExamples) {
  auto r0 = gramian::gramian(scalar(0), 5);
  EXPECT_EQ(r0.W(0, 0).re, 1.0);
  EXPECT_EQ(r0.lambda_min.to_double(), 1.0);
  auto r1 = gramian::gramian(scalar(0.5), 1);
  EXPECT_DOUBLE_EQ(r1.W(0, 0).re, 1.25);
  EXPECT_TRUE(r1.resolved);
}

TEST(Gramian, LowerShiftIsIdentity) {
  for (int n = 2; n <= 6; ++n) {
    auto sys = lower_shift_system(n);
    auto rep = gramian::gramian(sys, n - 1);
    EXPECT_NEAR(rep.lambda_min.to_double(), 1.0, 1e-14);
    EXPECT_NEAR(rep.lambda_max.to_double(), 1.0, 1e-14);
    EXPECT_LT(max_abs(subtract(rep.W, ComplexMatrix::identity(n))), 1e-15);
  }
}

TEST(Gramian, ControlEnergyExamples) {
  EXPECT_EQ(control_energy(scalar(0), 3).to_double(), 1.0);
  auto shift3 = lower_shift_system(3);
  EXPECT_TRUE(std::isinf(control_energy(shift3, 2).to_double()));
  EXPECT_NEAR(control_energy(shift3, 3).to_double(), 1.0, 1e-14);
}

TEST(Gramian, RankDeficientBeforeTMin) {
  SystemSpec spec;
  spec.n = 6;
  spec.k = 2;
  spec.region = Region::disk(0, 0.9);
  spec.seed = 8;
  auto sys = generate(spec);
  for (int t = 0; t < t_min(6, 2); ++t) {
    auto rep = gramian::gramian(sys, t);
    EXPECT_TRUE(rep.rank_deficient);
    EXPECT_EQ(rep.lambda_min.to_double(), 0.0);
  }
  EXPECT_FALSE(gramian::gramian(sys, t_min(6, 2)).rank_deficient);
}

TEST(Gramian, EscalatesForTinyLambdaMin) {
  // Eigenvalues clustered in a small interval: lambda_min far below 2^-33 lambda_max.
  SystemSpec spec;
  spec.n = 12;
  spec.k = 1;
  spec.region = Region::interval(-0.5, 0.5);
  spec.seed = 5;
  spec.hermitian = true;
  auto sys = generate(spec);
  auto rep = gramian::gramian(sys, 11);
  EXPECT_TRUE(rep.resolved);
  EXPECT_GT(rep.precision_bits_used, 53);
  EXPECT_LT(rep.lambda_min.to_double(), 1e-12);
  // rerun one rung higher: agreement to the coarse precision's resolution
  GramianOptions opt;
  opt.precision_bits = 2 * rep.precision_bits_used;
  auto fine = gramian::gramian(sys, 11, opt);
  EXPECT_NEAR(fine.lambda_min.to_double() / rep.lambda_min.to_double(), 1.0, 1e-6);
}

TEST(Gramian, OverflowWithoutEscalation) {
  auto sys = scalar(1e10);
  GramianOptions opt;
  opt.auto_escalate = false;
  try {
    gramian::gramian(sys, 40, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
  auto rep = gramian::gramian(sys, 40);
  EXPECT_GT(rep.precision_bits_used, 53);
  EXPECT_NEAR(rep.lambda_min.log10_abs(), 800.0, 1e-6);
}

TEST(Gramian, SteerExamples) {
  auto s0 = steer(scalar(0), {cplx(0)}, {cplx(1)}, 1);
  ASSERT_EQ(s0.inputs.size(), 1u);
  EXPECT_NEAR(s0.inputs[0][0].re, 1.0, 1e-15);
  EXPECT_NEAR(s0.energy, 1.0, 1e-15);
  auto zero = steer(scalar(0.3), {cplx(0)}, {cplx(0)}, 3);
  EXPECT_EQ(zero.energy, 0.0);
  auto half = steer(scalar(0.5), {cplx(0)}, {cplx(1)}, 2);
  EXPECT_NEAR(half.energy, 0.8, 1e-15);
  EXPECT_LT(half.target_residual, 1e-15);
}

TEST(Gramian, SteerUnreachable) {
  LinearSystem sys(ComplexMatrix{{cplx(0), cplx(0)}, {cplx(0), cplx(0)}}, ComplexMatrix{{cplx(1)}, {cplx(0)}});
  try {
    steer(sys, {cplx(0), cplx(0)}, {cplx(0), cplx(1)}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unreachable);
  }
}

TEST(Gramian, WorstDirectionExamples) {
  // W(0) = B B^* = diag(1, 4)
  LinearSystem sys(ComplexMatrix{{cplx(0), cplx(0)}, {cplx(0), cplx(0)}},
                   ComplexMatrix{{cplx(1), cplx(0)}, {cplx(0), cplx(2)}});
  auto wd = worst_direction(sys, 1);
  EXPECT_NEAR(abs(wd.y[0]), 1.0, 1e-14);
  EXPECT_NEAR(wd.energy, 1.0, 1e-14);
  LinearSystem iso(ComplexMatrix(3, 3), ComplexMatrix::identity(3));
  EXPECT_NEAR(worst_direction(iso, 2).energy, 1.0, 1e-14);
}

TEST(Gramian, PropertiesOnRandomSystems) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    SystemSpec spec;
    spec.n = 4;
    spec.k = 1 + static_cast<int>(seed % 2);
    spec.region = Region::disk(0, 0.95);
    spec.target_cond_V = 5;
    spec.seed = seed;
    auto sys = generate(spec);
    const int t = 6;
    auto wd = worst_direction(sys, t);
    EXPECT_NEAR(wd.energy * 1.0 / wd.inverse_lambda_min, 1.0, 1e-6);
    auto e = control_energy(sys, t).to_double();
    EXPECT_NEAR(wd.energy / e, 1.0, 1e-6);
    // steer hits an arbitrary target
    ComplexVector x0{cplx(1), cplx(0, 1), cplx(-1), cplx(0.5)}, xf{cplx(0.2), cplx(-1), cplx(0, 2), cplx(1)};
    auto plan = steer(sys, x0, xf, t);
    EXPECT_LT(plan.target_residual, 1e-8 * vector_norm(xf));
    EXPECT_NEAR(plan.energy / plan.quadratic_form, 1.0, 1e-8);
    auto x = simulate(sys, x0, plan.inputs);
    double miss = 0;
    for (int i = 0; i < 4; ++i) miss = std::max(miss, abs(x[i] - xf[i]));
    EXPECT_LT(miss, 1e-8);
    // monotone lambda_min and the sigma_min(S)^2 identity
    double prev = 0;
    for (int tt = 0; tt < 15; ++tt) {
      auto rep = gramian::gramian(sys, tt);
      const double cur = rep.lambda_min.to_double();
      EXPECT_GE(cur, prev * (1 - 1e-9));
      prev = cur;
      if (!rep.rank_deficient) {
        auto s = svd(controllability_matrix<double>(sys, tt));
        const double smin = s.values.back();
        EXPECT_NEAR(smin * smin / cur, 1.0, 1e-6);
      }
    }
  }
}

TEST(Gramian, SpectralMatchesDirect) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SystemSpec spec;
    spec.n = 7;
    spec.k = 2;
    spec.region = Region::interval(-1, 1);
    spec.hermitian = true;
    spec.stable_count = 5;
    spec.seed = seed;
    const auto sys = generate(spec);
    GramianOptions direct;
    direct.spectral = false;
    const auto a = gramian::gramian(sys, 40, direct);
    const auto b = gramian::gramian(sys, 40);
    EXPECT_FALSE(a.spectral);
    EXPECT_TRUE(b.spectral);
    ASSERT_TRUE(a.resolved && b.resolved);
    const double la = a.lambda_min.to_double(), lb = b.lambda_min.to_double();
    EXPECT_NEAR(lb, la, 1e-8 * la);
    EXPECT_NEAR(b.lambda_max.to_double(), a.lambda_max.to_double(), 1e-10 * a.lambda_max.to_double());
  }
}

TEST(Gramian, CertifyBelowStopsEarly) {
  SystemSpec spec;
  spec.n = 10;
  spec.k = 1;
  spec.region = Region::interval(-1, 1);
  spec.hermitian = true;
  spec.stable_count = 8;
  spec.seed = 4;
  const auto sys = generate(spec);
  GramianOptions opt;
  opt.certify_below = BigFloat(1.0);
  const auto rep = gramian::gramian(sys, 300, opt);
  EXPECT_TRUE(rep.resolved || rep.certified_below);
  EXPECT_LE(rep.lambda_min_upper, BigFloat(1.0));
  // Full resolution agrees with the certificate.
  const auto full = gramian::gramian(sys, 300);
  EXPECT_LE(full.lambda_min, rep.lambda_min_upper);
}

TEST(Gramian, NativeFloorEscalates) {
  // lambda_min below 1e-12 is never accepted in binary64.
  ComplexMatrix a(2, 2), b(2, 1);
  a(0, 0) = cplx(0.5);
  a(1, 1) = cplx(0.5 + 1e-7);
  b(0, 0) = cplx(1);
  b(1, 0) = cplx(1);
  const auto rep = gramian::gramian(LinearSystem(a, b), 1);
  EXPECT_LT(rep.lambda_min.to_double(), 1e-12);
  EXPECT_GT(rep.precision_bits_used, 53);
}
