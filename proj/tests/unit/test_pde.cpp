#include <cmath>
#include <cstdio>

#include <doctest.h>

#include "gapcert/errors.hpp"
#include "gapcert/pde.hpp"

using namespace gapcert;

namespace {

EllipticProblem square(double lo, double hi, FaceCondition bc, CoefficientField A = CoefficientField::identity(2)) {
  EllipticProblem p;
  p.domain.dim = 2;
  p.domain.lo = {lo, lo};
  p.domain.hi = {hi, hi};
  p.domain.faces.fill(bc);
  p.A = A;
  p.V.dim = 2;
  p.nu = A.lower_ellipticity();
  p.mu = A.upper_ellipticity();
  return p;
}

double entry(const DiscreteOperator& op, long i, long j) {
  return op.K.coeff(op.node_to_unknown[i], op.node_to_unknown[j]);
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::config_error;
}

}  // namespace

TEST_CASE("five-point stencil on the unit square") {
  const DiscreteOperator op = assemble(square(0, 1, FaceCondition::dirichlet), 0.25);
  CHECK(op.size() == 9);
  const GridInfo& g = op.grid;
  const long c = g.index(2, 2);
  CHECK(entry(op, c, c) == doctest::Approx(64.0));
  CHECK(entry(op, c, g.index(1, 2)) == doctest::Approx(-16.0));
  CHECK(entry(op, c, g.index(2, 3)) == doctest::Approx(-16.0));
  CHECK(entry(op, c, g.index(1, 1)) == 0.0);
  CHECK(entry(op, g.index(1, 1), g.index(1, 1)) == doctest::Approx(64.0));
}

TEST_CASE("separable coefficients give axis weights") {
  const double h = 0.25;
  const DiscreteOperator op =
      assemble(square(0, 1, FaceCondition::dirichlet, CoefficientField::diagonal(2, {2, 1})), h);
  const GridInfo& g = op.grid;
  const long c = g.index(2, 2);
  CHECK(entry(op, c, g.index(1, 2)) == doctest::Approx(-2 / (h * h)));
  CHECK(entry(op, c, g.index(2, 1)) == doctest::Approx(-1 / (h * h)));
  CHECK(entry(op, c, c) == doctest::Approx(6 / (h * h)));
}

TEST_CASE("neumann operator annihilates constants") {
  const DiscreteOperator op = assemble(square(0, 1, FaceCondition::neumann), 1.0 / 8);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(op.size());
  CHECK((op.K * one).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("assembled matrices are exactly symmetric") {
  EllipticProblem p = square(-1, 1, FaceCondition::dirichlet);
  p.A.matrix = {{{2.0, 0.5, 0}, {0.5, 1.0, 0}, {0, 0, 0}}};
  p.nu = p.A.lower_ellipticity();
  p.mu = p.A.upper_ellipticity();
  p.domain.faces[2] = FaceCondition::neumann;
  p.V.wells.push_back({Primitive::ball({0.2, 0.1}, 0.4), -3.0});
  const DiscreteOperator op = assemble(p, 1.0 / 16);
  const Eigen::SparseMatrix<double> K = op.K;
  const Eigen::SparseMatrix<double> Kt = K.transpose();
  CHECK((K - Kt).norm() == 0.0);
  const Eigen::SparseMatrix<double> S = op.symmetric_form();
  const Eigen::SparseMatrix<double> St = S.transpose();
  CHECK((S - St).norm() == 0.0);
}

TEST_CASE("assembly rejects bad grids and ellipticity violations") {
  CHECK(kind_of([] { assemble(square(0, 1, FaceCondition::dirichlet), 0.3); }) == ErrorKind::assembly_error);
  EllipticProblem p = square(0, 1, FaceCondition::dirichlet);
  p.nu = 2.0;  // A = I violates nu = 2
  CHECK(kind_of([&] { assemble(p, 0.25); }) == ErrorKind::assembly_error);
}

TEST_CASE("dirichlet square eigenvalues") {
  const DiscreteOperator op = assemble(square(0, 1, FaceCondition::dirichlet), 1.0 / 32);
  const EigenResult r = lowest_eigenpairs(op);
  CHECK(r.lambda0 == doctest::Approx(2 * M_PI * M_PI).epsilon(2e-3));
  CHECK(r.lambda1 == doctest::Approx(5 * M_PI * M_PI).epsilon(5e-3));
  CHECK(r.residual0 <= 1e-8);
  CHECK(r.residual1 <= 1e-8);
  double mn = 1e300;
  for (long i = 0; i < r.grid.total(); ++i)
    if (r.quadrature[i] > 0) mn = std::min(mn, r.psi0[i]);
  CHECK(mn > 0);
  CHECK(l2_norm_squared(r, r.psi0) == doctest::Approx(1.0));
}

TEST_CASE("neumann ground state is constant") {
  const DiscreteOperator op = assemble(square(0, 1, FaceCondition::neumann), 1.0 / 16);
  const EigenResult r = lowest_eigenpairs(op);
  CHECK(std::abs(r.lambda0) < 1e-7);
  double mn = 1e300, mx = 0;
  for (double v : r.psi0) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  CHECK((mx - mn) / mx < 1e-6);
  CHECK(r.lambda1 == doctest::Approx(M_PI * M_PI).epsilon(1e-2));
}

TEST_CASE("solver is deterministic for a fixed seed") {
  const DiscreteOperator op = assemble(square(0, 1, FaceCondition::dirichlet), 1.0 / 16);
  const EigenResult a = lowest_eigenpairs(op), b = lowest_eigenpairs(op);
  CHECK(a.lambda0 == b.lambda0);
  CHECK(a.lambda1 == b.lambda1);
  CHECK(a.psi1 == b.psi1);
}

namespace {

struct Small {
  Region omega0;
  OmegaHat hat;
  EigenResult r;
};

Small small_double_well(double depth) {
  EllipticProblem p = square(-3, 3, FaceCondition::dirichlet);
  Small s;
  s.omega0.dim = 2;
  for (double x : {-1.0, 1.0}) {
    s.omega0.primitives.push_back(Primitive::ball({x, 0}, 0.5));
    p.V.wells.push_back({Primitive::ball({x, 0}, 0.5), depth});
  }
  s.hat.clearance = 0.3;
  s.r = lowest_eigenpairs(assemble(p, 1.0 / 8));
  return s;
}

}  // namespace

TEST_CASE("eigenfunction diagnostics on a small double well") {
  Small s = small_double_well(-12.0);
  REQUIRE(s.r.lambda1 < 0);
  normalize_second(s.r, s.omega0);
  const std::vector<double> once = s.r.psi1;
  normalize_second(s.r, s.omega0);
  CHECK(once == s.r.psi1);

  const LogValue C18 = LogValue::from_double(1e6, 192);
  const SecondEigenfunctionReport rep = second_eigenfunction_diagnostics(s.r, s.omega0, C18);
  CHECK(rep.node_check);
  CHECK(rep.max_check);
  CHECK(rep.min_in_omega0 == doctest::Approx(-1.0).epsilon(1e-6));

  const GroundStateReport g =
      ground_state_diagnostics(s.r, s.omega0, s.hat, 2.5, LogValue::from_double(1e10, 192));
  CHECK(g.sign_pure);
  CHECK(g.harnack_within_C2);

  TubeSpec tube;
  tube.a = {-1, 0};
  tube.b = {1, 0};
  tube.radius = 0.3;
  const GapFormulaTerms t = gap_formula_rhs(s.r, tube, 1.0);
  CHECK(t.rhs > 0);
  CHECK(s.r.lambda1 - s.r.lambda0 >= 0.95 * t.rhs);

  EigenResult prop = s.r;
  for (std::size_t i = 0; i < prop.psi1.size(); ++i) prop.psi1[i] = 2.5 * prop.psi0[i];
  CHECK(gap_formula_rhs(prop, tube, 1.0).rhs == doctest::Approx(0.0).epsilon(1e-12));

  EigenResult flipped = s.r;
  long inner = 0;
  for (long i = 0; i < flipped.grid.total(); ++i)
    if (flipped.quadrature[i] > 0 && flipped.psi0[i] > 1e-3) inner = i;
  flipped.psi0[inner] = -flipped.psi0[inner];
  CHECK(kind_of([&] { ground_state_diagnostics(flipped, s.omega0, s.hat, 2.5, LogValue::from_double(1e10, 192)); }) ==
        ErrorKind::positivity_violation);
}

TEST_CASE("shallow wells leave the certified regime") {
  Small s = small_double_well(-0.1);
  CHECK(s.r.lambda1 >= 0);
  normalize_second(s.r, s.omega0);
  CHECK(kind_of([&] { second_eigenfunction_diagnostics(s.r, s.omega0, LogValue::from_double(1, 192)); }) ==
        ErrorKind::hypothesis_violation);
}

TEST_CASE("grid export round trip") {
  GridInfo g;
  g.dim = 2;
  g.origin = {-1, 0.5};
  g.h = 0.25;
  g.nodes = {3, 2, 1};
  const std::vector<double> v = {1, 2, 3, 4, 5, 6.5};
  const std::string path = "grid_roundtrip_test.bin";
  write_grid_binary(path, g, v);
  GridInfo back;
  const std::vector<double> w = read_grid_binary(path, back);
  std::remove(path.c_str());
  CHECK(w == v);
  CHECK(back.nodes == g.nodes);
  CHECK(back.h == g.h);
  CHECK(back.origin == g.origin);
}
