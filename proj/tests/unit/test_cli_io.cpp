#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctrlcap/cli/cli.hpp"
#include "ctrlcap/numerics/random.hpp"

using namespace ctrlcap;
using ctrlcap::io::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ctrlcap_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "ctrlcap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

cli::RunConfig random_config(numerics::Rng& rng) {
  cli::RunConfig c;
  c.command = static_cast<cli::Command>(rng.below(11));
  c.seed = rng.next();
  const int bits[] = {53, 64, 128, 212, 4096};
  c.precision_bits = bits[rng.below(5)];
  c.output_format = rng.below(2) ? "csv" : "json";
  c.output_path = rng.below(2) ? "" : "out/" + std::to_string(rng.below(1000)) + ".json";
  c.jobs = static_cast<int>(rng.below(9));
  c.region = rng.below(2) ? "disk:0,0," + std::to_string(rng.uniform()) : "";
  c.n = static_cast<int>(rng.below(60));
  c.k = 1 + static_cast<int>(rng.below(3));
  c.t = static_cast<int>(rng.below(5000)) - 1;
  c.m = static_cast<int>(rng.below(100));
  c.l = static_cast<int>(rng.below(40));
  c.trials = static_cast<int>(rng.below(200));
  c.q = rng.uniform(0, 100);
  c.cond = rng.uniform(1, 1e4);
  c.b_fro = rng.uniform(0.1, 3);
  c.hermitian = rng.below(2) == 1;
  if (rng.below(2)) c.stable_count = static_cast<int>(rng.below(60));
  c.trend = rng.below(2) == 1;
  c.exact = rng.below(2) == 1;
  for (int i = 0, e = static_cast<int>(rng.below(4)); i < e; ++i) c.n_list.push_back(1 + static_cast<int>(rng.below(60)));
  for (int i = 0, e = static_cast<int>(rng.below(4)); i < e; ++i) c.multipliers.push_back(rng.uniform(0, 20));
  return c;
}

}  // namespace

TEST(Io, BigFloatRoundTrip) {
  numerics::PrecisionScope scope(256);
  const numerics::BigFloat x = numerics::BigFloat(1) / numerics::BigFloat(3) * ldexp(numerics::BigFloat(1), -200);
  const json j = io::big_json(x);
  EXPECT_EQ(j["precision_bits"], 256);
  EXPECT_TRUE(io::big_from_json(j) == x);
}

TEST(Io, MatrixAndSystemRoundTrip) {
  system::SystemSpec s;
  s.n = 5;
  s.k = 2;
  s.region = capacity::Region::disk({0.1, 0.2}, 0.5);
  s.target_cond_V = 10;
  s.seed = 4;
  const auto sys = system::generate(s);
  const auto back = io::system_from_json(json::parse(io::to_json(sys).dump()));
  EXPECT_EQ(back.A().data(), sys.A().data());
  EXPECT_EQ(back.B().data(), sys.B().data());
  const auto spec = io::spec_from_json(io::to_json(s));
  EXPECT_EQ(spec.region.to_spec(), s.region.to_spec());
  EXPECT_EQ(spec.seed, 4u);
}

TEST(Io, SystemFileErrors) {
  try {
    io::system_from_json(json{{"A", json::array({json::array({1, 2})})}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(Io, CsvNumberRoundTrips) {
  for (double x : {1.0 / 3, 1.0206188658705e-37, 6.02e23, -0.0})
    EXPECT_EQ(std::strtod(io::csv_number(x).c_str(), nullptr), x);
}

TEST(Cli, ConfigRoundTripProperty) {
  numerics::Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const cli::RunConfig c = random_config(rng);
    const json j = cli::config_to_json(c);
    EXPECT_EQ(cli::config_from_json(json::parse(j.dump())), c) << j.dump();
  }
}

TEST(Cli, ParsedConfigRoundTrips) {
  const char* argv[] = {"ctrlcap", "verify-thm2", "--n", "30", "--stable-count", "15", "--q", "2", "--seed", "7",
                        "--precision-bits", "128", "--format", "csv"};
  const auto p = cli::parse_args(14, argv);
  ASSERT_TRUE(p.config.has_value());
  EXPECT_EQ(p.config->command, cli::Command::VerifyThm2);
  EXPECT_EQ(p.config->stable_count, 15);
  EXPECT_EQ(p.config->precision_bits, 128);
  EXPECT_EQ(cli::config_from_json(cli::config_to_json(*p.config)), *p.config);
}

TEST(Cli, PrecisionFromEnvironment) {
  ::setenv("GRAMIAN_BOUNDS_PRECISION", "256", 1);
  const char* argv[] = {"ctrlcap", "thm2", "--m", "10", "--q", "1"};
  auto p = cli::parse_args(6, argv);
  EXPECT_EQ(p.config->precision_bits, 256);
  const char* argv2[] = {"ctrlcap", "thm2", "--m", "10", "--q", "1", "--precision-bits", "64"};
  p = cli::parse_args(8, argv2);
  EXPECT_EQ(p.config->precision_bits, 64);
  ::unsetenv("GRAMIAN_BOUNDS_PRECISION");
  EXPECT_EQ(cli::default_precision(), 53);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run({"capacity"}), 1);
  EXPECT_EQ(run({"nonsense"}), 1);
  EXPECT_EQ(run({"thm2", "--m", "2", "--q", "1"}), 1);  // HypothesisViolated
  EXPECT_EQ(run({"--help"}), 0);
}

TEST(Cli, CapacityAndErr) {
  const auto out = scratch("cap.json");
  ASSERT_EQ(run({"capacity", "--region", "interval:0,1", "--out", out.string()}), 0);
  const json j = json::parse(slurp(out));
  EXPECT_NEAR(j["estimate"]["value"].get<double>(), 0.25, 1e-15);
  EXPECT_EQ(j["estimate"]["method"], "closed_form");

  const auto err = scratch("err.json");
  ASSERT_EQ(run({"err", "--region", "disk:0,0,0.5", "--l", "10", "--out", err.string()}), 0);
  EXPECT_NEAR(json::parse(slurp(err))["result"]["error"].get<double>(), std::pow(0.5, 10), 1e-9);
}

TEST(Cli, ReproduceDocument) {
  const auto out = scratch("repro.json");
  ASSERT_EQ(run({"reproduce", "--out", out.string()}), 0);
  const json j = json::parse(slurp(out));
  ASSERT_EQ(j["lines"].size(), 4u);
  EXPECT_LT(j["lines"][2]["relative_deviation"].get<double>(), 0.02);
}

TEST(Cli, DefectiveSystemFileExitsOne) {
  const auto sys = scratch("shift.json");
  {
    std::ofstream f(sys);
    f << io::to_json(system::lower_shift_system(5)).dump();
  }
  testing::internal::CaptureStderr();
  const int code = run({"verify-thm1", "--system", sys.string(), "--region", "disk:0,0,0.5"});
  const std::string err = testing::internal::GetCapturedStderr();
  EXPECT_EQ(code, 1);
  EXPECT_EQ(json::parse(err)["error"]["kind"], "Defective");
}

TEST(Cli, BatchOutputsAreByteIdentical) {
  const auto a = scratch("batch_a.csv");
  const auto b = scratch("batch_b.csv");
  ASSERT_EQ(run({"verify-thm2", "--trials", "3", "--seed", "40", "--jobs", "1", "--format", "csv", "--out", a.string()}), 0);
  ASSERT_EQ(run({"verify-thm2", "--trials", "3", "--seed", "40", "--jobs", "3", "--format", "csv", "--out", b.string()}), 0);
  // The CSV carries no config, so the worker count must not show.
  EXPECT_EQ(slurp(a), slurp(b));
  const std::string csv = slurp(a);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "seed,n,k,t,lambda_min,bound,ratio,holds");
  EXPECT_TRUE(std::filesystem::exists(a.string() + ".json"));

  const auto c = scratch("conj_c.json");
  const auto d = scratch("conj_d.json");
  ASSERT_EQ(run({"conjecture", "--n-list", "4,5", "--multipliers", "0.5,2", "--trials", "2", "--seed", "1", "--out",
                 c.string()}),
            0);
  ASSERT_EQ(run({"conjecture", "--n-list", "4,5", "--multipliers", "0.5,2", "--trials", "2", "--seed", "1", "--out",
                 d.string()}),
            0);
  auto strip = [](std::string s) {
    const auto at = s.find("\"output_path\"");
    return s.erase(at, s.find('\n', at) - at);
  };
  EXPECT_EQ(strip(slurp(c)), strip(slurp(d)));
}

TEST(Cli, VerifyExitCodes) {
  const auto out = scratch("v1.json");
  EXPECT_EQ(run({"verify-thm1", "--n", "8", "--k", "2", "--region", "disk:0,0,0.8", "--seed", "2", "--out",
                 out.string()}),
            0);
  const json j = json::parse(slurp(out));
  EXPECT_TRUE(j["verification"]["report"]["holds"].get<bool>());
  EXPECT_TRUE(j["verification"]["capacity_indicator"]["asymptotic_only"].get<bool>());
}
