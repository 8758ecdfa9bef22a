#include "ctrlcap/numerics/error.hpp"

namespace ctrlcap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Unresolved: return "Unresolved";
    case ErrorKind::Defective: return "Defective";
    case ErrorKind::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::DegenerateRegion: return "DegenerateRegion";
    case ErrorKind::OptimizationStalled: return "OptimizationStalled";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::DeskScaleExceeded: return "DeskScaleExceeded";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace ctrlcap
