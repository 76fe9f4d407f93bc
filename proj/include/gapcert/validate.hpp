#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapcert/cert_core.hpp"
#include "gapcert/config.hpp"
#include "gapcert/geometry.hpp"
#include "gapcert/pde.hpp"

namespace gapcert {

/// Everything geometry measures for the certificate, with the estimator
/// details kept alongside the scalar inputs.
struct Measurements {
  CertificateInputs inputs;
  VolumeEstimate volume;            // |Omega0 inflated by d/4|; inputs use value + error
  LocalNormResult local_V;          // centres in Omega-hat_{d/4}, radius d/4
  LocalNormResult local_Vminus;     // centres in Omega0, radius d/2
  double clearance_r0 = 0.0;        // r0 before clamping to d
  bool mu_bumped = false;           // mu == nu on input, nudged up
  AssumptionReport assumptions;
};

/// Ellipticity pair used by the certificate: the config override when given,
/// otherwise the extreme eigenvalues of A; mu is raised by a factor 1 + 1e-6
/// when the field is isotropic and homogeneous (mu == nu).
std::pair<double, double> ellipticity_bounds(const ProblemConfig& p, const CertificateConfig& c, bool* bumped = nullptr);

Measurements measure(const ProblemConfig& p, const CertificateConfig& c);

/// Default tube: the segment between the centres of the first two Omega0
/// primitives (or across the only one), radius r0.
TubeSpec default_tube(const ProblemConfig& p, double r0);

EigenResult solve_problem(const ProblemConfig& p, const SolverConfig& s, double nu, double mu);

enum class CheckStatus { pass, fail, skip };
std::string_view to_string(CheckStatus s);

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::fail;
  std::string detail;
};

struct ValidationRecord {
  Measurements measurements;
  ConstantChain chain;
  Section5Constants section5;
  double cross_path_max = 0.0;      // worst relative log difference of the renamed constants
  TubeSpec tube;

  double lambda0 = 0.0, lambda1 = 0.0;
  double residual0 = 0.0, residual1 = 0.0;
  int iterations = 0;
  bool degenerate = false;
  double relative_gap = 0.0;        // (lambda1 - lambda0) / |lambda1|
  bool in_hypotheses = false;       // lambda0 < lambda1 < 0
  bool certified = false;

  std::optional<GroundStateReport> ground;
  std::optional<SecondEigenfunctionReport> second;
  std::optional<GapFormulaTerms> gap_terms;

  std::vector<Check> checks;

  const Check* find(const std::string& name) const;
  /// "name=P;name=F;..." in check order.
  std::string check_flags() const;
};

/// Measures, certifies, solves and cross-examines one configuration. Throws
/// assumption_violation when the geometric standing assumptions fail; a
/// nonnegative second eigenvalue yields an uncertified record instead.
/// `fields`, when given, receives the normalized eigenpairs.
ValidationRecord certify_and_solve(const ProblemConfig& p, const CertificateConfig& c, const SolverConfig& s,
                                   EigenResult* fields = nullptr);

}  // namespace gapcert
