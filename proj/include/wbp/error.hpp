#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wbp {

enum class ErrorCode {
  invalid_argument,
  unsupported_capability,
  atom_on_boundary,
  non_positive_mass,
  pair_mismatch,
  marginal_mismatch,
  inadmissible_plan,
  missing_potential,
  size_bound_exceeded,
  parse_error,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wbp
