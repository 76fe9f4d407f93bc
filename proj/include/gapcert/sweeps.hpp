#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapcert/config.hpp"
#include "gapcert/validate.hpp"

namespace gapcert {

struct LeastSquaresFit {
  std::vector<double> coefficients;
  double r2 = 0.0;  // 0 when the data have no variance
};

/// Ordinary least squares of y on the given regressor columns.
LeastSquaresFit least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

/// Base problem with the swept parameter applied.
///   separation:    the first two Omega0 primitives and wells centred at (-/+ s/2, 0, ...)
///   coupling:      every well value set to the parameter
///   semiclassical: constant A rescaled to parameter * A0, where A0 = base A / its smallest eigenvalue
///   contrast:      checkerboard values {parameter, mu} with mu the base's larger value
ProblemConfig sweep_problem(const ProblemConfig& base, SweepRegime regime, double value);

struct SweepPoint {
  double param = 0.0;
  std::optional<ValidationRecord> record;
  std::string error_kind;  // set when the point failed to run
  std::string error_message;
};

/// Certificate-shape test along L: log(bound) + c11 L + (n+1) ln L on the
/// points whose c1 sits on the first branch of its min.
struct ShapeCheck {
  std::vector<double> L;
  std::vector<std::string> value;  // the shape quantity, decimal
  std::vector<bool> first_branch;
  double relative_variation = 0.0;
  bool passed = false;
};

struct SweepCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SweepResult {
  SweepRegime regime = SweepRegime::separation;
  std::vector<SweepPoint> points;  // sorted by parameter, ascending
  std::optional<LeastSquaresFit> fit;
  std::optional<LeastSquaresFit> control_fit;
  std::optional<ShapeCheck> shape;
  std::vector<SweepCheck> checks;
  bool all_passed() const;
};

/// Runs one point per parameter value and the regime's checks. Points that
/// fail numerically are recorded and skipped; fewer than four usable points
/// for a regression raise insufficient_data.
SweepResult run_sweep(const ProblemConfig& base, const CertificateConfig& c, const SolverConfig& s,
                      const SweepSpec& spec);

/// Shape quantity along L for fixed other inputs.
ShapeCheck separation_shape(const CertificateInputs& base, const std::vector<double>& L, unsigned precision);

/// Coefficients and R^2 of the semiclassical template: normalized log bound
/// against {1, 1/sqrt(nu), ln(nu)/sqrt(nu)}.
LeastSquaresFit semiclassical_fit(const std::vector<double>& nu, const std::vector<LogValue>& bounds);

std::string sweep_csv(const SweepResult& r);
std::string sweep_summary_json(const SweepResult& r);

}  // namespace gapcert
