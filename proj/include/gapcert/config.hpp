#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapcert/cert_core.hpp"
#include "gapcert/fields.hpp"
#include "gapcert/geometry.hpp"
#include "gapcert/pde.hpp"

namespace gapcert {

struct ProblemConfig {
  DomainSpec domain;
  CoefficientField A;
  PotentialField V;
  Region omega0;
  OmegaHat omega_hat;
  std::optional<TubeSpec> tube;  // radius <= 0 means "use r0"
};

struct CertificateConfig {
  double q = 4.0;
  VhatVariant variant = VhatVariant::literal;
  unsigned precision = BigFloat::default_precision;
  std::optional<double> mu, nu;            // override the bounds read off A
  double center_step_fraction = 1.0 / 40;  // of d
  double volume_step_fraction = 1.0 / 200; // of d
  double norm_step_fraction = 1.0 / 100;   // of d
  int max_refinements = 3;
};

struct SolverConfig {
  double h = 1.0 / 32;
  double tol = 1e-8;
  std::uint64_t seed = 20240531;
  FaceAveraging averaging = FaceAveraging::arithmetic;
  int max_iterations = 600;
};

enum class SweepRegime { separation, coupling, semiclassical, contrast };
std::string_view to_string(SweepRegime r);

struct SweepSpec {
  SweepRegime regime = SweepRegime::separation;
  std::vector<double> values;
};

enum class OutputFormat { table, csv, json };

struct OutputConfig {
  std::string directory;
  OutputFormat format = OutputFormat::json;
};

struct RunConfig {
  std::optional<ProblemConfig> problem;
  std::optional<CertificateInputs> certificate_inputs;
  CertificateConfig certificate;
  SolverConfig solver;
  std::optional<SweepSpec> sweep;
  OutputConfig output;
};

/// Parses and validates a configuration document. Unknown keys, wrong types
/// and missing required fields raise config_error.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace gapcert
