#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctrlcap/io/io.hpp"

namespace ctrlcap::cli {

enum class Command {
  Reproduce,
  Thm2,
  Lemma2,
  Capacity,
  Err,
  Phi,
  Gramian,
  Generate,
  VerifyThm1,
  VerifyThm2,
  Conjecture,
};

std::string_view to_string(Command c);
Command command_from_string(std::string_view name);

struct RunConfig {
  Command command = Command::Reproduce;
  std::uint64_t seed = 0;
  int precision_bits = 53;
  std::string output_format = "json";  // json | csv
  std::string output_path;             // empty: stdout
  int jobs = 1;

  std::string region;
  std::string system_file;
  int n = 0, k = 1, t = -1, m = 0, l = 0;
  int n_max = 40;
  int trials = 0;
  double q = 0;
  double cond = 1;
  double b_fro = 1;
  bool hermitian = false;
  std::optional<int> stable_count;
  bool trend = false;
  bool exact = false;
  std::vector<int> n_list;
  std::vector<double> multipliers;

  bool operator==(const RunConfig&) const = default;
};

io::json config_to_json(const RunConfig& c);
RunConfig config_from_json(const io::json& j);

/// Default precision: GRAMIAN_BOUNDS_PRECISION when set, else 53.
int default_precision();

struct ParseOutcome {
  std::optional<RunConfig> config;  // empty after --help / --version
  int exit_code = 0;
  std::string message;              // help text or usage error
};

ParseOutcome parse_args(int argc, const char* const* argv);

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 bound violated
  std::string text;   // contents written to the output path
  std::string sidecar;  // extended-precision JSON for batch CSV output
  std::string console;  // human-readable lines for stdout (reproduce)
};

/// Runs one command. Throws ctrlcap::Error on module errors.
RunResult execute(const RunConfig& config);

/// Full front end: parse, execute, write files, map errors to exit 1 with an
/// error JSON on stderr.
int main(int argc, const char* const* argv);

}  // namespace ctrlcap::cli
