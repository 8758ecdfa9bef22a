#include "ctrlcap/cli/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ctrlcap/numerics/precision.hpp"

namespace ctrlcap::cli {

using io::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 11> kCommands{{
    {Command::Reproduce, "reproduce"},
    {Command::Thm2, "thm2"},
    {Command::Lemma2, "lemma2"},
    {Command::Capacity, "capacity"},
    {Command::Err, "err"},
    {Command::Phi, "phi"},
    {Command::Gramian, "gramian"},
    {Command::Generate, "generate"},
    {Command::VerifyThm1, "verify-thm1"},
    {Command::VerifyThm2, "verify-thm2"},
    {Command::Conjecture, "conjecture"},
}};

constexpr const char* kRegionHelp =
    "region spec: interval:a,b | disk:cx,cy,r | ngon:n,h | twointervals:a,b | halfdisk:r | ellipse:a,b | "
    "square:l | triangle:l | polygon:x1,y1;x2,y2;... | polyline:... | points:... ; optional affine suffix "
    "@scale_re,scale_im,shift_re,shift_im. A path to a .json file holding {\"region\": spec} or "
    "{\"polygon\": [[x, y], ...]} is accepted too.";

capacity::Region load_region(const std::string& text) {
  require(!text.empty(), ErrorKind::InvalidArgument, "--region is required");
  if (text.size() > 5 && text.ends_with(".json")) {
    std::ifstream in(text);
    require(static_cast<bool>(in), ErrorKind::ParseError, "cannot open region file " + text);
    try {
      const json j = json::parse(in);
      if (j.contains("region")) return capacity::parse_region(j["region"].get<std::string>());
      if (j.contains("polygon")) {
        std::vector<capacity::Point> v;
        for (const auto& p : j["polygon"]) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        return capacity::Region::polygon(std::move(v));
      }
    } catch (const json::exception& e) {
      fail(ErrorKind::ParseError, "region file " + text + ": " + e.what());
    }
    fail(ErrorKind::ParseError, "region file needs a \"region\" or \"polygon\" entry");
  }
  return capacity::parse_region(text);
}

system::SystemSpec spec_of(const RunConfig& c) {
  system::SystemSpec s;
  s.n = c.n;
  s.k = c.k;
  s.region = c.region.empty() ? capacity::Region::interval(-1, 1) : load_region(c.region);
  s.target_cond_V = c.cond;
  s.hermitian = c.hermitian;
  s.stable_count = c.stable_count;
  s.seed = c.seed;
  s.b_fro = c.b_fro;
  return s;
}

bounds::VerifyOptions verify_options(const RunConfig& c) {
  bounds::VerifyOptions o;
  o.gramian.precision_bits = c.precision_bits;
  return o;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Top-level scalars as name,value rows.
std::string flat_csv(const json& j) {
  std::string out = "name,value\n";
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() && value.contains("value") && value.contains("precision_bits"))
      out += key + "," + value["value"].get<std::string>() + "\n";
    else if (value.is_number_float())
      out += key + "," + io::csv_number(value.get<double>()) + "\n";
    else if (value.is_primitive())
      out += key + "," + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return out;
}

bool csv(const RunConfig& c) { return c.output_format == "csv"; }

RunResult batch_output(const RunConfig& c, const std::vector<bounds::TrialResult>& rows) {
  RunResult r;
  json trials = json::array();
  bool violated = false, failed = false;
  for (const auto& row : rows) {
    trials.push_back(io::to_json(row));
    if (row.error_kind) failed = true;
    if (row.report && row.report->holds && !*row.report->holds) violated = true;
    if (row.identities && !row.identities->all_ok()) violated = true;
  }
  json doc{{"config", config_to_json(c)}, {"trials", trials}};
  if (csv(c)) {
    std::ostringstream out;
    io::write_trials_csv(out, rows);
    r.text = out.str();
    r.sidecar = dump(doc);
  } else {
    r.text = dump(doc);
  }
  r.exit_code = violated ? 2 : failed ? 1 : 0;
  return r;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "unknown";
}

Command command_from_string(std::string_view name) {
  for (const auto& [cmd, n] : kCommands)
    if (n == name) return cmd;
  fail(ErrorKind::ParseError, "unknown command '" + std::string(name) + "'");
}

json config_to_json(const RunConfig& c) {
  return json{{"command", std::string(to_string(c.command))},
              {"seed", c.seed},
              {"precision_bits", c.precision_bits},
              {"output_format", c.output_format},
              {"output_path", c.output_path},
              {"jobs", c.jobs},
              {"region", c.region},
              {"system_file", c.system_file},
              {"n", c.n},
              {"k", c.k},
              {"t", c.t},
              {"m", c.m},
              {"l", c.l},
              {"n_max", c.n_max},
              {"trials", c.trials},
              {"q", c.q},
              {"cond", c.cond},
              {"b_fro", c.b_fro},
              {"hermitian", c.hermitian},
              {"stable_count", c.stable_count ? json(*c.stable_count) : json(nullptr)},
              {"trend", c.trend},
              {"exact", c.exact},
              {"n_list", c.n_list},
              {"multipliers", c.multipliers}};
}

RunConfig config_from_json(const json& j) {
  try {
    RunConfig c;
    c.command = command_from_string(j.at("command").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.precision_bits = j.at("precision_bits").get<int>();
    c.output_format = j.at("output_format").get<std::string>();
    c.output_path = j.at("output_path").get<std::string>();
    c.jobs = j.at("jobs").get<int>();
    c.region = j.at("region").get<std::string>();
    c.system_file = j.at("system_file").get<std::string>();
    c.n = j.at("n").get<int>();
    c.k = j.at("k").get<int>();
    c.t = j.at("t").get<int>();
    c.m = j.at("m").get<int>();
    c.l = j.at("l").get<int>();
    c.n_max = j.at("n_max").get<int>();
    c.trials = j.at("trials").get<int>();
    c.q = j.at("q").get<double>();
    c.cond = j.at("cond").get<double>();
    c.b_fro = j.at("b_fro").get<double>();
    c.hermitian = j.at("hermitian").get<bool>();
    if (!j.at("stable_count").is_null()) c.stable_count = j["stable_count"].get<int>();
    c.trend = j.at("trend").get<bool>();
    c.exact = j.at("exact").get<bool>();
    c.n_list = j.at("n_list").get<std::vector<int>>();
    c.multipliers = j.at("multipliers").get<std::vector<double>>();
    return c;
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("run config: ") + e.what());
  }
}

int default_precision() {
  const char* env = std::getenv("GRAMIAN_BOUNDS_PRECISION");
  if (env == nullptr || *env == '\0') return numerics::kNativeBits;
  char* end = nullptr;
  const long bits = std::strtol(env, &end, 10);
  require(end != env && *end == '\0', ErrorKind::ParseError,
          std::string("GRAMIAN_BOUNDS_PRECISION must be an integer, got '") + env + "'");
  numerics::check_precision(static_cast<int>(bits));
  return static_cast<int>(bits);
}

ParseOutcome parse_args(int argc, const char* const* argv) {
  RunConfig c;
  c.precision_bits = default_precision();
  CLI::App app{"Controllability Gramians, control energy and eigenvalue-clustering bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ctrlcap 0.1.0");

  std::optional<int> stable_count;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--precision-bits", c.precision_bits, "initial precision: 53 or 64..4096")
        ->check(CLI::Range(53, 4096));
    sub->add_option("--jobs", c.jobs, "worker threads (0 = all cores)")->check(CLI::Range(0, 1024));
    sub->add_option("--format", c.output_format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", c.output_path, "output file (default stdout)");
  };
  auto system_options = [&](CLI::App* sub) {
    sub->add_option("--n", c.n, "state dimension");
    sub->add_option("--k", c.k, "input count");
    sub->add_option("--region", c.region, kRegionHelp);
    sub->add_option("--cond", c.cond, "target cond(V)");
    sub->add_option("--b-fro", c.b_fro, "Frobenius norm of B");
    sub->add_flag("--hermitian", c.hermitian, "Hermitian A");
    sub->add_option("--stable-count", stable_count, "Hermitian mode: eigenvalues inside the region");
  };

  auto* reproduce = app.add_subcommand("reproduce", "recompute the four headline constants (labeled lines; --out writes the document)");
  common(reproduce);
  auto* thm2 = app.add_subcommand("thm2", "evaluate t_quad and the Hermitian bound");
  common(thm2);
  thm2->add_option("--m", c.m, "stable eigenvalues")->required();
  thm2->add_option("--k", c.k, "inputs");
  thm2->add_option("--q", c.q, "q > 0")->required();
  thm2->add_option("--b-fro", c.b_fro, "Frobenius norm of B");
  auto* lemma2 = app.add_subcommand("lemma2", "closed form and direct sums of Phi_{n,m}^2");
  common(lemma2);
  lemma2->add_option("--m", c.m)->required();
  lemma2->add_option("--q", c.q)->required();
  lemma2->add_flag("--exact", c.exact, "also sum the exact Phi_{n,m}^2 (m <= 40)");
  auto* cap = app.add_subcommand("capacity", "logarithmic capacity of a region");
  common(cap);
  cap->add_option("--region", c.region, kRegionHelp)->required();
  cap->add_option("--n-max", c.n_max, "largest Fekete level");
  auto* err = app.add_subcommand("err", "minimax error Err(l, X) of z^l");
  common(err);
  err->add_option("--region", c.region, kRegionHelp)->required();
  err->add_option("--l", c.l, "degree")->required();
  err->add_flag("--trend", c.trend, "emit (l, Err^(1/l)) for 1..l instead");
  auto* phi = app.add_subcommand("phi", "Phi_{n,m} with its binomial and Hoeffding bounds");
  common(phi);
  phi->add_option("--n", c.n)->required();
  phi->add_option("--m", c.m)->required();
  auto* gram = app.add_subcommand("gramian", "Gramian W(t) and its extreme eigenvalues");
  common(gram);
  system_options(gram);
  gram->add_option("--system", c.system_file, "system JSON file with A and B");
  gram->add_option("--t", c.t, "time index")->required();
  auto* gen = app.add_subcommand("generate", "write a random system with the given structure");
  common(gen);
  system_options(gen);
  auto* v1 = app.add_subcommand("verify-thm1", "check the eigenvalue-region bound on systems");
  common(v1);
  system_options(v1);
  v1->add_option("--system", c.system_file, "system JSON file with A and B");
  v1->add_option("--trials", c.trials, "random trials starting at --seed");
  auto* v2 = app.add_subcommand("verify-thm2", "check the Hermitian bound on systems");
  common(v2);
  system_options(v2);
  v2->add_option("--q", c.q, "q > 0");
  v2->add_option("--t", c.t, "time index (default floor(t_quad))");
  v2->add_option("--trials", c.trials, "random trials starting at --seed");
  auto* conj = app.add_subcommand("conjecture", "tabulate lambda_min(W(t)) for t around n^2");
  common(conj);
  conj->add_option("--n-list", c.n_list, "state dimensions")->delimiter(',')->required();
  conj->add_option("--multipliers", c.multipliers, "t / n^2 values")->delimiter(',')->required();
  conj->add_option("--trials", c.trials, "systems per placement")->required();

  ParseOutcome outcome;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, errs;
    outcome.exit_code = app.exit(e, out, errs);
    outcome.message = out.str() + errs.str();
    return outcome;
  }
  for (CLI::App* sub : app.get_subcommands()) c.command = command_from_string(sub->get_name());
  c.stable_count = stable_count;
  numerics::check_precision(c.precision_bits);
  outcome.config = c;
  return outcome;
}

RunResult execute(const RunConfig& c) {
  RunResult r;
  json doc{{"config", config_to_json(c)}};
  switch (c.command) {
    case Command::Reproduce: {
      json lines = json::array();
      std::ostringstream console, table;
      table << "label,stated_value,recomputed,relative_deviation,note\n";
      for (const auto& line : bounds::reproduce()) {
        lines.push_back(io::to_json(line));
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-55s stated %-9.4g recomputed %.5g  deviation %.2f%%", line.label.c_str(),
                      line.stated_value, line.recomputed, 100 * line.deviation);
        console << buf << "\n    " << line.note << "\n";
        table << '"' << line.label << "\"," << io::csv_number(line.stated_value) << ','
              << io::csv_number(line.recomputed) << ',' << io::csv_number(line.deviation) << ",\"" << line.note
              << "\"\n";
      }
      doc["lines"] = lines;
      r.console = console.str();
      r.text = csv(c) ? table.str() : dump(doc);
      return r;
    }
    case Command::Thm2: {
      const auto v = bounds::thm2(c.m, c.k, c.q, c.b_fro);
      doc["t_quad"] = v.t_quad;
      doc["bound"] = v.bound;
      r.text = csv(c) ? flat_csv(doc) : dump(doc);
      return r;
    }
    case Command::Lemma2: {
      doc["result"] = io::to_json(bounds::lemma2_sum(c.m, c.q, c.exact));
      r.text = csv(c) ? flat_csv(doc["result"]) : dump(doc);
      return r;
    }
    case Command::Capacity: {
      const capacity::Region x = load_region(c.region);
      capacity::FeketeOptions fo;
      fo.seed = c.seed;
      fo.jobs = c.jobs;
      const auto e = capacity::capacity(x, c.n_max, fo);
      doc["region"] = x.to_spec();
      doc["estimate"] = io::to_json(e);
      doc["upper_bounds"] = io::to_json(capacity::check_upper_bounds(x, e.value, 0.02));
      if (csv(c)) {
        std::string out = "n,d_n\n";
        for (std::size_t i = 0; i < e.d_sequence.size(); ++i)
          out += std::to_string(e.levels[i]) + "," + io::csv_number(e.d_sequence[i]) + "\n";
        r.text = out;
        r.sidecar = dump(doc);
      } else {
        r.text = dump(doc);
      }
      return r;
    }
    case Command::Err: {
      const capacity::Region x = load_region(c.region);
      doc["region"] = x.to_spec();
      if (c.trend) {
        const auto trend = approx::err_capacity_trend(x, c.l);
        json rows = json::array();
        std::string out = "l,err_root\n";
        for (const auto& [l, v] : trend) {
          rows.push_back(json::array({l, v}));
          out += std::to_string(l) + "," + io::csv_number(v) + "\n";
        }
        doc["trend"] = rows;
        r.text = csv(c) ? out : dump(doc);
      } else {
        doc["result"] = io::to_json(approx::err_region(c.l, x));
        r.text = csv(c) ? flat_csv(doc["result"]) : dump(doc);
      }
      return r;
    }
    case Command::Phi: {
      require(c.m >= 0 && c.n >= c.m, ErrorKind::InvalidArgument, "phi needs 0 <= m <= n");
      doc["exact"] = io::to_json(approx::phi_exact(c.n, c.m));
      const auto trunc = approx::cheb_truncation(c.n, c.m);
      doc["binomial_tail"] = trunc.tail_bound;
      doc["hoeffding"] = approx::phi_hoeffding(c.n, c.m);
      r.text = csv(c) ? flat_csv(json{{"phi_exact", doc["exact"]["error"]},
                                      {"binomial_tail", trunc.tail_bound},
                                      {"hoeffding", doc["hoeffding"]}})
                      : dump(doc);
      return r;
    }
    case Command::Gramian: {
      require(c.t >= 0, ErrorKind::InvalidArgument, "gramian needs --t >= 0");
      const system::LinearSystem sys =
          c.system_file.empty() ? system::generate(spec_of(c)) : io::read_system_file(c.system_file);
      gramian::GramianOptions go;
      go.precision_bits = c.precision_bits;
      const auto rep = gramian::gramian(sys, c.t, go);
      doc["report"] = io::to_json(rep);
      if (rep.resolved && !rep.rank_deficient && rep.lambda_min > numerics::BigFloat(0)) {
        numerics::PrecisionScope scope(std::max(rep.precision_bits_used, numerics::kMinExtendedBits));
        doc["control_energy_next_step"] = io::big_json(numerics::BigFloat(1) / rep.lambda_min);
      } else {
        doc["control_energy_next_step"] = nullptr;
      }
      r.text = csv(c) ? flat_csv(doc["report"]) : dump(doc);
      return r;
    }
    case Command::Generate: {
      const auto spec = spec_of(c);
      const auto g = system::generate_with_structure(spec);
      json j = io::to_json(g.system);
      j["spec"] = io::to_json(spec);
      j["cond_V"] = g.cond_V;
      json eig = json::array();
      for (const auto& z : g.eigenvalues) eig.push_back(json::array({z.re, z.im}));
      j["eigenvalues"] = eig;
      r.text = dump(j);
      return r;
    }
    case Command::VerifyThm1: {
      if (c.trials > 0) return batch_output(c, bounds::thm1_batch(c.seed, c.trials, verify_options(c), c.jobs));
      bounds::Thm1Verification v;
      if (!c.system_file.empty()) {
        v = bounds::verify_thm1_system(io::read_system_file(c.system_file), load_region(c.region), verify_options(c));
      } else {
        const auto spec = spec_of(c);
        v = bounds::verify_thm1(spec, spec.region, verify_options(c));
      }
      doc["verification"] = io::to_json(v);
      r.text = csv(c) ? flat_csv(doc["verification"]["report"]) : dump(doc);
      const bool ok = v.report.holds.value_or(true) && (!v.identities || v.identities->all_ok());
      r.exit_code = ok ? 0 : 2;
      return r;
    }
    case Command::VerifyThm2: {
      if (c.trials > 0) return batch_output(c, bounds::thm2_batch(c.seed, c.trials, verify_options(c), c.jobs));
      auto spec = spec_of(c);
      spec.hermitian = true;
      const int m = spec.stable_count.value_or(spec.n);
      const int t = c.t >= 0 ? c.t : static_cast<int>(bounds::thm2(m, spec.k, c.q, spec.b_fro).t_quad);
      const auto rep = bounds::verify_thm2(spec, c.q, t, verify_options(c));
      doc["report"] = io::to_json(rep);
      r.text = csv(c) ? flat_csv(doc["report"]) : dump(doc);
      r.exit_code = rep.holds.value_or(true) ? 0 : 2;
      return r;
    }
    case Command::Conjecture: {
      const auto rows = bounds::conjecture_scan(c.n_list, c.multipliers, c.trials, c.seed, c.jobs);
      json arr = json::array();
      for (const auto& row : rows) arr.push_back(io::to_json(row));
      doc["rows"] = arr;
      if (csv(c)) {
        std::ostringstream out;
        io::write_conjecture_csv(out, rows);
        r.text = out.str();
      } else {
        r.text = dump(doc);
      }
      return r;
    }
  }
  fail(ErrorKind::InvalidArgument, "unhandled command");
}

int main(int argc, const char* const* argv) {
  std::string out_path;
  try {
    const ParseOutcome parsed = parse_args(argc, argv);
    if (!parsed.config) {
      (parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.message;
      return parsed.exit_code == 0 ? 0 : 1;
    }
    const RunConfig& c = *parsed.config;
    out_path = c.output_path;
    const RunResult r = execute(c);
    // Commands with console lines print them instead of the document unless
    // --out is given ("-" sends the document to stdout).
    if (!r.console.empty()) {
      std::cout << r.console;
      std::cout.flush();
      if (c.output_path.empty()) return r.exit_code;
    }
    io::write_text(c.output_path, r.text);
    if (!r.sidecar.empty() && !c.output_path.empty() && c.output_path != "-")
      io::write_text(c.output_path + ".json", r.sidecar);
    return r.exit_code;
  } catch (const Error& e) {
    std::cerr << json{{"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"kind", "Internal"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  }
}

}  // namespace ctrlcap::cli
