#include "gapcert/errors.hpp"

namespace gapcert {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::inconsistent_input: return "inconsistent_input";
    case ErrorKind::precision_exhausted: return "precision_exhausted";
    case ErrorKind::assumption_violation: return "assumption_violation";
    case ErrorKind::geometry_infeasible: return "geometry_infeasible";
    case ErrorKind::unsupported_method: return "unsupported_method";
    case ErrorKind::assembly_error: return "assembly_error";
    case ErrorKind::convergence_error: return "convergence_error";
    case ErrorKind::positivity_violation: return "positivity_violation";
    case ErrorKind::hypothesis_violation: return "hypothesis_violation";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::config_error: return "config_error";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::hypothesis_violation:
    case ErrorKind::assumption_violation:
    case ErrorKind::geometry_infeasible:
    case ErrorKind::inconsistent_input:
      return 1;
    case ErrorKind::invalid_input:
    case ErrorKind::config_error:
    case ErrorKind::unsupported_method:
      return 3;
    default:
      return 2;
  }
}

}  // namespace gapcert
