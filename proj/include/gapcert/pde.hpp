#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "gapcert/fields.hpp"
#include "gapcert/geometry.hpp"
#include "gapcert/log_value.hpp"

namespace gapcert {

enum class FaceAveraging { arithmetic, harmonic };

struct EllipticProblem {
  DomainSpec domain;
  CoefficientField A;
  PotentialField V;
  /// Declared ellipticity bounds; every sample of A must respect them.
  double nu = 0.0;
  double mu = 0.0;
};

/// Node lattice x = lo + h * index covering the closed box.
struct GridInfo {
  int dim = 2;
  Point origin{};
  double h = 0.0;
  std::array<long, 3> nodes{1, 1, 1};

  long total() const { return nodes[0] * nodes[1] * nodes[2]; }
  long index(long i, long j, long k = 0) const { return i + nodes[0] * (j + nodes[1] * k); }
  std::array<long, 3> coords(long node) const;
  Point position(long node) const;
};

/// K u = lambda W u with K symmetric (stiffness scaled by h^-n plus the
/// potential) and W the diagonal lumped-mass fractions (1, 1/2, 1/4, ...).
struct DiscreteOperator {
  GridInfo grid;
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd weights;
  std::vector<long> unknown_to_node;
  std::vector<long> node_to_unknown;  // -1 on eliminated Dirichlet nodes

  long size() const { return static_cast<long>(unknown_to_node.size()); }
  /// W^{-1/2} K W^{-1/2}, exactly symmetric.
  Eigen::SparseMatrix<double> symmetric_form() const;
  /// Quadrature weight of each grid node (mass fraction times h^n, zero on Dirichlet nodes).
  std::vector<double> node_quadrature() const;
};

DiscreteOperator assemble(const EllipticProblem& problem, double h,
                          FaceAveraging averaging = FaceAveraging::arithmetic);

struct EigenOptions {
  double tol = 1e-8;           // absolute residual ||H v - lambda v|| for unit v
  std::uint64_t seed = 20240531;
  int block = 4;
  int max_basis = 40;
  int max_iterations = 600;
};

struct EigenResult {
  GridInfo grid;
  std::vector<double> quadrature;  // per node
  double lambda0 = 0.0, lambda1 = 0.0;
  std::vector<double> psi0, psi1;  // grid functions on all nodes
  double residual0 = 0.0, residual1 = 0.0;
  int iterations = 0;
  bool degenerate = false;
  bool psi1_normalized = false;
};

/// Two algebraically smallest eigenpairs by shift-invert block subspace
/// iteration with Rayleigh-Ritz (thick restart). psi0 comes out positive with
/// unit L2 norm, psi1 with unit L2 norm.
EigenResult lowest_eigenpairs(const DiscreteOperator& op, int k = 2, const EigenOptions& options = {});

/// Scales psi1 so that max over the closed Omega0 of |psi1| equals its max,
/// which is 1. Idempotent.
void normalize_second(EigenResult& result, const Region& omega0);

double l2_norm_squared(const EigenResult& r, const std::vector<double>& f);

struct GroundStateReport {
  bool sign_pure = false;
  double min_relative = 0.0;      // min psi0 / max psi0
  double harnack_ratio = 0.0;     // sup / inf over the Omega-hat d/8 neighbourhood
  long harnack_points = 0;
  double log10_harnack_ratio = 0.0;
  std::string log10_C2;
  bool harnack_within_C2 = false;
};

GroundStateReport ground_state_diagnostics(const EigenResult& result, const Region& omega0,
                                           const OmegaHat& omega_hat, double d, const LogValue& C2,
                                           double tol = 1e-8);

struct SecondEigenfunctionReport {
  double min_in_omega0 = 0.0;
  bool node_check = false;
  double global_max_abs = 0.0;
  bool max_check = false;
  double l2_norm_squared = 0.0;
  std::string log10_l2_limit;     // log10(C18 / |lambda1|)
  bool l2_check = false;
};

SecondEigenfunctionReport second_eigenfunction_diagnostics(const EigenResult& result, const Region& omega0,
                                                           const LogValue& C18, double node_eps = 1e-8,
                                                           double max_eps = 1e-6);

struct GapFormulaTerms {
  double inf_psi0 = 0.0;
  double tube_volume = 0.0;
  double psi1_l2_squared = 0.0;
  double grad_l1 = 0.0;
  long tube_points = 0;
  double rhs = 0.0;
};

/// nu (inf_tube psi0)^2 / (|tube| ||psi1||^2) * ||grad(psi1/psi0)||_{L1(tube)}^2.
GapFormulaTerms gap_formula_rhs(const EigenResult& result, const TubeSpec& tube, double nu);

/// Dense binary export: int32 n, int64 dims[n], float64 h, float64 origin[n],
/// float64 values with x fastest; little-endian.
void write_grid_binary(const std::string& path, const GridInfo& grid, const std::vector<double>& values);
std::vector<double> read_grid_binary(const std::string& path, GridInfo& grid);
void write_grid_csv(const std::string& path, const GridInfo& grid, const std::vector<double>& values);

}  // namespace gapcert
