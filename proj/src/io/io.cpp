#include "ctrlcap/io/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ctrlcap::io {

using numerics::BigFloat;

json big_json(const BigFloat& x) {
  const int bits = x.precision();
  const int digits = static_cast<int>(std::ceil(bits * 0.30102999566398120)) + 2;
  return json{{"value", x.to_string(digits)}, {"precision_bits", bits}};
}

BigFloat big_from_json(const json& j) {
  try {
    return BigFloat::from_string(j.at("value").get<std::string>(), j.at("precision_bits").get<int>());
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("extended value: ") + e.what());
  }
}

json matrix_json(const numerics::ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).re, m(i, j).im}));
    rows.push_back(std::move(row));
  }
  return rows;
}

numerics::ComplexMatrix matrix_from_json(const json& j) {
  require(j.is_array() && !j.empty() && j[0].is_array(), ErrorKind::ParseError, "matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  numerics::ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(j[i].is_array() && j[i].size() == cols, ErrorKind::ParseError, "matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = j[i][c];
      if (e.is_number()) {
        m(i, c) = numerics::cplx(e.get<double>());
      } else {
        require(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number(), ErrorKind::ParseError,
                "matrix entries must be numbers or [re, im] pairs");
        m(i, c) = numerics::cplx(e[0].get<double>(), e[1].get<double>());
      }
    }
  }
  return m;
}

namespace {

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json complex_list(const std::vector<std::complex<double>>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(json::array({z.real(), z.imag()}));
  return out;
}

}  // namespace

json to_json(const approx::MinimaxResult& r) {
  return json{{"l", r.l},
              {"m", r.m},
              {"error", r.error},
              {"certified_gap", r.certified_gap},
              {"lower_bound", r.lower_bound},
              {"solve_error", r.solve_error},
              {"grid_size", r.grid_size},
              {"validation_size", r.validation_size},
              {"iterations", r.iterations},
              {"alternation_points", r.alternation_points},
              {"basis", std::string(approx::to_string(r.basis))},
              {"center", json::array({r.center.real(), r.center.imag()})},
              {"rho", r.rho},
              {"epsilon", r.epsilon},
              {"theta", r.theta},
              {"degenerate", r.degenerate},
              {"coefficients", complex_list(r.coefficients)}};
}

json to_json(const capacity::CapacityEstimate& e) {
  return json{{"value", e.value},
              {"method", std::string(capacity::to_string(e.method))},
              {"n_points", e.n_points},
              {"energy", e.energy},
              {"levels", e.levels},
              {"d_sequence", e.d_sequence},
              {"fit_residual", e.fit_residual},
              {"spread", e.spread},
              {"stalled", e.stalled},
              {"closed_form", optional_number(e.closed_form)}};
}

json to_json(const capacity::UpperBoundCheck& c) {
  return json{{"length_bound", optional_number(c.length_bound)},
              {"diameter_bound", c.diameter_bound},
              {"holds", c.holds}};
}

json to_json(const system::SystemSpec& s) {
  return json{{"n", s.n},
              {"k", s.k},
              {"region", s.region.to_spec()},
              {"target_cond_V", s.target_cond_V},
              {"hermitian", s.hermitian},
              {"stable_count", s.stable_count ? json(*s.stable_count) : json(nullptr)},
              {"seed", s.seed},
              {"b_fro", s.b_fro}};
}

system::SystemSpec spec_from_json(const json& j) {
  try {
    system::SystemSpec s;
    s.n = j.at("n").get<int>();
    s.k = j.value("k", 1);
    s.region = capacity::parse_region(j.value("region", std::string("interval:-1,1")));
    s.target_cond_V = j.value("target_cond_V", 1.0);
    s.hermitian = j.value("hermitian", false);
    if (j.contains("stable_count") && !j["stable_count"].is_null()) s.stable_count = j["stable_count"].get<int>();
    s.seed = j.value("seed", std::uint64_t{0});
    s.b_fro = j.value("b_fro", 1.0);
    return s;
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("system spec: ") + e.what());
  }
}

json to_json(const system::LinearSystem& sys) {
  return json{{"n", sys.n()}, {"k", sys.k()}, {"A", matrix_json(sys.A())}, {"B", matrix_json(sys.B())}};
}

system::LinearSystem system_from_json(const json& j) {
  require(j.is_object() && j.contains("A") && j.contains("B"), ErrorKind::ParseError,
          "system file needs \"A\" and \"B\" matrices");
  return system::LinearSystem(matrix_from_json(j["A"]), matrix_from_json(j["B"]));
}

system::LinearSystem read_system_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::ParseError, "cannot open system file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, "system file " + path + ": " + e.what());
  }
  return system_from_json(j);
}

json to_json(const gramian::GramianReport& r, bool with_matrix) {
  json j{{"t", r.t},
         {"lambda_min", big_json(r.lambda_min)},
         {"lambda_max", big_json(r.lambda_max)},
         {"lambda_min_upper", big_json(r.lambda_min_upper)},
         {"precision_bits_used", r.precision_bits_used},
         {"resolved", r.resolved},
         {"rank_deficient", r.rank_deficient},
         {"certified_below", r.certified_below},
         {"spectral", r.spectral}};
  if (with_matrix) j["W"] = matrix_json(r.W);
  return j;
}

json to_json(const bounds::BoundReport& r) {
  const auto& in = r.inputs;
  json inputs = json::object();
  auto put = [&](const char* key, const auto& value) {
    if (value) inputs[key] = *value;
  };
  put("cond_V", in.cond_V);
  put("B_fro", in.b_fro);
  put("n", in.n);
  put("t", in.t);
  put("m", in.m);
  put("k", in.k);
  put("q", in.q);
  put("Err", in.err);
  put("Err_certified_gap", in.err_gap);
  put("cap", in.cap);
  put("seed", in.seed);
  return json{{"bound_name", std::string(bounds::to_string(r.bound_name))},
              {"bound_value", r.bound_value},
              {"empirical_value", r.empirical_value ? big_json(*r.empirical_value) : json(nullptr)},
              {"ratio", optional_number(r.ratio)},
              {"inputs_digest", inputs},
              {"holds", r.holds ? json(*r.holds) : json(nullptr)},
              {"asymptotic_only", r.asymptotic_only},
              {"certified_only", r.certified_only},
              {"precision_bits", r.precision_bits}};
}

json to_json(const bounds::ProofIdentities& p) {
  return json{{"precision_bits", p.precision_bits},
              {"lambda_min_Q", p.lambda_min_q},
              {"sigma_n_S_squared", p.sigma_n_sz_squared},
              {"identity_rel_error", p.identity_rel_error},
              {"sigma_n_S", p.sigma_n_s},
              {"S_minus_L_fro", p.s_minus_l},
              {"sbound_rhs", p.sbound_rhs},
              {"rank_ratio_L", p.rank_ratio},
              {"rank_budget", p.rank_budget},
              {"identity_ok", p.identity_ok},
              {"sigma_ok", p.sigma_ok},
              {"sbound_ok", p.sbound_ok},
              {"rank_ok", p.rank_ok}};
}

json to_json(const bounds::Thm1Verification& v) {
  json j{{"report", to_json(v.report)},
         {"capacity_indicator", v.capacity_indicator ? to_json(*v.capacity_indicator) : json(nullptr)},
         {"err", to_json(v.err)},
         {"gramian", to_json(v.gramian, false)},
         {"identities", v.identities ? to_json(*v.identities) : json(nullptr)},
         {"cond_V", v.cond_v},
         {"hermitian", v.hermitian}};
  return j;
}

json to_json(const bounds::TrialResult& r) {
  json j{{"seed", r.seed}, {"n", r.n}, {"k", r.k}, {"t", r.t}, {"region", r.region}, {"cond_target", r.cond_target}};
  if (r.m) j["m"] = *r.m;
  if (r.q) j["q"] = *r.q;
  j["report"] = r.report ? to_json(*r.report) : json(nullptr);
  j["identities"] = r.identities ? to_json(*r.identities) : json(nullptr);
  if (r.error_kind) j["error"] = json{{"kind", *r.error_kind}, {"message", r.error_message}};
  return j;
}

json to_json(const bounds::ConjectureRow& r) {
  return json{{"n", r.n},
              {"multiplier", r.multiplier},
              {"t", r.t},
              {"placement", r.placement},
              {"lambda_min", r.lambda_min},
              {"log10_lambda_min", std::isfinite(r.log10_lambda_min) ? json(r.log10_lambda_min) : json(nullptr)},
              {"monotone", r.monotone}};
}

json to_json(const bounds::ReproLine& r) {
  return json{{"label", r.label},
              {"stated_value", r.stated_value},
              {"recomputed", r.recomputed},
              {"relative_deviation", r.deviation},
              {"note", r.note}};
}

json to_json(const bounds::Lemma2Value& v) {
  return json{{"closed_bound", v.closed_bound},
              {"direct_sum", optional_number(v.direct_sum)},
              {"exact_sum", optional_number(v.exact_sum)},
              {"upper_index", v.upper_index},
              {"desk_scale_exceeded", v.desk_scale_exceeded}};
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trials_csv(std::ostream& out, const std::vector<bounds::TrialResult>& rows) {
  out << "seed,n,k,t,lambda_min,bound,ratio,holds\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << r.n << ',' << r.k << ',' << r.t << ',';
    if (r.report) {
      const auto& rep = *r.report;
      out << (rep.empirical_value ? rep.empirical_value->to_string(17) : "") << ',' << csv_number(rep.bound_value)
          << ',' << (rep.ratio ? csv_number(*rep.ratio) : "") << ','
          << (rep.holds ? (*rep.holds ? "true" : "false") : "") << '\n';
    } else {
      out << ",,," << r.error_kind.value_or("error") << '\n';
    }
  }
}

void write_conjecture_csv(std::ostream& out, const std::vector<bounds::ConjectureRow>& rows) {
  out << "n,multiplier,t,placement,lambda_min,log10_lambda_min,monotone\n";
  for (const auto& r : rows)
    out << r.n << ',' << csv_number(r.multiplier) << ',' << r.t << ',' << r.placement << ','
        << csv_number(r.lambda_min) << ',' << (std::isfinite(r.log10_lambda_min) ? csv_number(r.log10_lambda_min) : "")
        << ',' << (r.monotone ? "true" : "false") << '\n';
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorKind::InvalidArgument, "write failed for " + path);
}

}  // namespace ctrlcap::io
