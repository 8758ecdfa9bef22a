#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctrlcap/approx/approx.hpp"
#include "ctrlcap/bounds/bounds.hpp"
#include "ctrlcap/capacity/capacity.hpp"
#include "ctrlcap/gramian/gramian.hpp"
#include "ctrlcap/system/system.hpp"

namespace ctrlcap::io {

using json = nlohmann::ordered_json;

/// Extended-precision value as {"value": decimal string, "precision_bits": p}.
/// The decimal carries enough digits to round-trip at p bits.
json big_json(const numerics::BigFloat& x);
numerics::BigFloat big_from_json(const json& j);

/// Matrices are row-major arrays of [re, im] pairs.
json matrix_json(const numerics::ComplexMatrix& m);
numerics::ComplexMatrix matrix_from_json(const json& j);

json to_json(const approx::MinimaxResult& r);
json to_json(const capacity::CapacityEstimate& e);
json to_json(const capacity::UpperBoundCheck& c);
json to_json(const system::SystemSpec& s);
json to_json(const system::LinearSystem& sys);
json to_json(const gramian::GramianReport& r, bool with_matrix = true);
json to_json(const bounds::BoundReport& r);
json to_json(const bounds::ProofIdentities& p);
json to_json(const bounds::Thm1Verification& v);
json to_json(const bounds::TrialResult& r);
json to_json(const bounds::ConjectureRow& r);
json to_json(const bounds::ReproLine& r);
json to_json(const bounds::Lemma2Value& v);

system::SystemSpec spec_from_json(const json& j);

/// System file: {"A": matrix, "B": matrix}. Throws ParseError.
system::LinearSystem system_from_json(const json& j);
system::LinearSystem read_system_file(const std::string& path);

/// 17 significant digits, the shortest width that round-trips binary64.
std::string csv_number(double x);

/// seed,n,k,t,lambda_min,bound,ratio,holds; failed trials leave the numeric
/// fields empty and holds = error kind.
void write_trials_csv(std::ostream& out, const std::vector<bounds::TrialResult>& rows);
void write_conjecture_csv(std::ostream& out, const std::vector<bounds::ConjectureRow>& rows);

/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace ctrlcap::io
