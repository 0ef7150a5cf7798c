#include "wbp/error.hpp"

namespace wbp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::unsupported_capability: return "unsupported-capability";
    case ErrorCode::atom_on_boundary: return "atom-on-A";
    case ErrorCode::non_positive_mass: return "non-positive-mass";
    case ErrorCode::pair_mismatch: return "pair-mismatch";
    case ErrorCode::marginal_mismatch: return "marginal-mismatch";
    case ErrorCode::inadmissible_plan: return "inadmissible-plan";
    case ErrorCode::missing_potential: return "missing-potential";
    case ErrorCode::size_bound_exceeded: return "size-bound-exceeded";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace wbp
