#pragma once

#include <stdexcept>
#include <string>

namespace holder {

enum class ErrorKind {
  invalid_argument,
  separation_violated,
  invalid_seed,
  invalid_map,
  normalization,
  budget_exceeded,
  bracket_failure,
  eigensolver,
  numerical_inconsistency,
  insufficient_prefix,
  undefined_spectrum,
  infeasible_plan,
  unresolved,
  malformed_config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace holder
