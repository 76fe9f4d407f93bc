#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapcert {

/// Failure categories shared by every module. The CLI maps them onto exit codes.
enum class ErrorKind {
  invalid_input,         // malformed scalar inputs (dimension, exponents, signs)
  inconsistent_input,    // inputs contradict the hypotheses they claim to satisfy
  precision_exhausted,   // a log-domain value lost all significant bits
  assumption_violation,  // standing geometric assumptions fail
  geometry_infeasible,   // no admissible tube of positive radius
  unsupported_method,
  assembly_error,
  convergence_error,
  positivity_violation,
  hypothesis_violation,  // lambda1 >= 0: outside the certified regime
  insufficient_data,
  config_error,
};

std::string_view to_string(ErrorKind kind);

/// Exit code contract of the command-line tool.
///   1: valid run, hypotheses or assumptions unmet
///   2: numerical failure
///   3: configuration error
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gapcert
