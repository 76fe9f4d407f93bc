#include <cmath>

#include <doctest.h>

#include "../oracle_values.hpp"
#include "gapcert/config.hpp"
#include "gapcert/pde.hpp"
#include "gapcert/validate.hpp"

using namespace gapcert;
namespace oracle = gapcert::test::oracle;

namespace {

RunConfig p0() { return load_config(std::string(GAPCERT_CONFIG_DIR) + "/double_well_p0.json"); }

EigenResult solve_at(ProblemConfig p, double h) {
  SolverConfig s = p0().solver;
  s.h = h;
  return solve_problem(p, s, 1.0, 1.000001);
}

}  // namespace

TEST_CASE("double well at h = 1/64 against the extrapolated eigenvalues") {
  const EigenResult r = solve_at(*p0().problem, 1.0 / 64);
  CHECK(r.lambda0 == doctest::Approx(oracle::dw_lambda0_h64).epsilon(1e-7));
  CHECK(r.lambda1 == doctest::Approx(oracle::dw_lambda1_h64).epsilon(1e-7));
  CHECK(std::abs(r.lambda0 / oracle::dw_lambda0_extrapolated - 1) <= 0.02);
  CHECK(std::abs(r.lambda1 / oracle::dw_lambda1_extrapolated - 1) <= 0.02);
}

TEST_CASE("double well eigenfunctions at h = 1/32") {
  const RunConfig cfg = p0();
  EigenResult r = solve_at(*cfg.problem, 1.0 / 32);
  CHECK(r.lambda0 == doctest::Approx(oracle::dw_lambda0_h32).epsilon(1e-7));
  CHECK(r.lambda1 == doctest::Approx(oracle::dw_lambda1_h32).epsilon(1e-7));
  normalize_second(r, cfg.problem->omega0);

  // psi1 is odd and psi0 even under x -> -x; the grid is symmetric about 0.
  const GridInfo& g = r.grid;
  double odd = 0, even = 0, scale0 = 0;
  for (long j = 0; j < g.nodes[1]; ++j)
    for (long i = 0; i < g.nodes[0]; ++i) {
      const long a = g.index(i, j), b = g.index(g.nodes[0] - 1 - i, j);
      odd = std::max(odd, std::abs(r.psi1[a] + r.psi1[b]));
      even = std::max(even, std::abs(r.psi0[a] - r.psi0[b]));
      scale0 = std::max(scale0, std::abs(r.psi0[a]));
    }
  CHECK(odd <= 1e-6);
  CHECK(even <= 1e-6 * scale0);

  // Extremes of psi1 sit on the wells.
  long imax = 0, imin = 0;
  for (long n = 0; n < g.total(); ++n) {
    if (r.psi1[n] > r.psi1[imax]) imax = n;
    if (r.psi1[n] < r.psi1[imin]) imin = n;
  }
  CHECK(cfg.problem->omega0.signed_distance(g.position(imax)) <= 0.5);
  CHECK(cfg.problem->omega0.signed_distance(g.position(imin)) <= 0.5);
  CHECK(g.position(imax)[0] * g.position(imin)[0] < 0);
}

TEST_CASE("doubling the box leaves the eigenvalues in place") {
  const RunConfig cfg = p0();
  ProblemConfig big = *cfg.problem;
  for (int i = 0; i < 2; ++i) {
    big.domain.lo[i] *= 2;
    big.domain.hi[i] *= 2;
  }
  const EigenResult r = solve_at(big, 1.0 / 32);
  CHECK(std::abs(r.lambda0 / oracle::dw_lambda0_h32 - 1) < 1e-3);
  CHECK(std::abs(r.lambda1 / oracle::dw_lambda1_h32 - 1) < 1e-3);
}
