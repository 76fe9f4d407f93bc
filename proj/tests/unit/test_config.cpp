#include <cmath>
#include <filesystem>

#include <doctest.h>

#include "gapcert/config.hpp"
#include "gapcert/errors.hpp"
#include "gapcert/sweeps.hpp"
#include "gapcert/validate.hpp"

using namespace gapcert;

namespace {

const char* kDoubleWell = R"({
  "problem": {
    "dimension": 2,
    "box": {"lo": [-6, -6], "hi": [6, 6]},
    "boundary": "dirichlet",
    "coefficients": {"type": "constant", "matrix": [[1, 0], [0, 1]]},
    "potential": {"wells": [
      {"shape": "ball", "center": [-2, 0], "radius": 0.5, "value": -8},
      {"shape": "ball", "center": [2, 0], "radius": 0.5, "value": -8}]},
    "omega0": [{"shape": "ball", "center": [-2, 0], "radius": 0.5},
               {"shape": "ball", "center": [2, 0], "radius": 0.5}],
    "omega_hat": {"hull_clearance": 0.5}
  },
  "solver": {"h": 0.03125}
})";

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::invalid_input;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("a complete problem parses") {
  const RunConfig cfg = parse_config(kDoubleWell);
  REQUIRE(cfg.problem);
  CHECK(cfg.problem->domain.all_dirichlet());
  CHECK(cfg.problem->omega0.primitives.size() == 2);
  CHECK(cfg.problem->V.wells[1].value == -8);
  CHECK(cfg.solver.h == 0.03125);
  CHECK(cfg.certificate.q == 4);
  CHECK(cfg.certificate.precision == 192);
}

TEST_CASE("schema violations are configuration errors") {
  CHECK(kind_of([] { parse_config("{"); }) == ErrorKind::config_error);
  CHECK(kind_of([] { parse_config(R"({"solver": {"h": 0.1}})"); }) == ErrorKind::config_error);
  CHECK(kind_of([] { parse_config(replace(kDoubleWell, "\"solver\"", "\"solvr\"")); }) == ErrorKind::config_error);
  CHECK(kind_of([] { parse_config(replace(kDoubleWell, "\"radius\": 0.5, \"value\"", "\"radius\": -1, \"value\"")); }) ==
        ErrorKind::config_error);
  CHECK(kind_of([] { parse_config(replace(kDoubleWell, "\"h\": 0.03125", "\"h\": \"small\"")); }) ==
        ErrorKind::config_error);
  CHECK(kind_of([] { parse_config(replace(kDoubleWell, "[[1, 0], [0, 1]]", "[[1, 0.5], [0, 1]]")); }) ==
        ErrorKind::config_error);
  CHECK(kind_of([] {
          parse_config(R"({"certificate_inputs": {"n": 2, "mu": 2, "nu": 1, "d": 1, "L": 4, "r0": 0.1,
            "sup_local_V": 1, "sup_local_Vminus": 1, "norm_Vminus_Omega0": 1, "vol_Omega0_d4": 1}})");
        }) == ErrorKind::config_error);
  CHECK(kind_of([] {
          parse_config(replace(kDoubleWell, "\"solver\"", "\"sweep\": {\"regime\": \"separation\", \"values\": [3, 5, 4]}, \"solver\""));
        }) == ErrorKind::config_error);
}

TEST_CASE("shipped configurations parse") {
  const std::filesystem::path dir = GAPCERT_CONFIG_DIR;
  int count = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    INFO(e.path().string());
    if (e.path().filename() == "missing-q.json") {
      CHECK(kind_of([&] { load_config(e.path().string()); }) == ErrorKind::config_error);
    } else {
      CHECK_NOTHROW(load_config(e.path().string()));
    }
    ++count;
  }
  CHECK(count >= 8);
}

TEST_CASE("ellipticity bounds and the isotropic bump") {
  const RunConfig cfg = parse_config(kDoubleWell);
  bool bumped = false;
  const auto [nu, mu] = ellipticity_bounds(*cfg.problem, cfg.certificate, &bumped);
  CHECK(nu == 1.0);
  CHECK(mu == doctest::Approx(1.000001).epsilon(1e-15));
  CHECK(bumped);

  CertificateConfig c = cfg.certificate;
  c.mu = 3.0;
  const auto [nu2, mu2] = ellipticity_bounds(*cfg.problem, c, &bumped);
  CHECK(mu2 == 3.0);
  CHECK_FALSE(bumped);
  c.nu = 2.0;
  CHECK(kind_of([&] { ellipticity_bounds(*cfg.problem, c); }) == ErrorKind::config_error);
}

TEST_CASE("default tube joins the first two wells") {
  const RunConfig cfg = parse_config(kDoubleWell);
  const TubeSpec t = default_tube(*cfg.problem, 0.5);
  CHECK(t.a[0] == -2);
  CHECK(t.b[0] == 2);
  CHECK(t.radius == 0.5);
}

TEST_CASE("sweep transformations") {
  const RunConfig cfg = parse_config(kDoubleWell);
  const ProblemConfig sep = sweep_problem(*cfg.problem, SweepRegime::separation, 5);
  CHECK(sep.omega0.primitives[0].center[0] == -2.5);
  CHECK(sep.V.wells[1].shape.center[0] == 2.5);
  const ProblemConfig cpl = sweep_problem(*cfg.problem, SweepRegime::coupling, -3);
  CHECK(cpl.V.wells[0].value == -3);
  ProblemConfig base = *cfg.problem;
  base.A = CoefficientField::diagonal(2, {1, 2});
  const ProblemConfig sc = sweep_problem(base, SweepRegime::semiclassical, 0.25);
  CHECK(sc.A.lower_ellipticity() == doctest::Approx(0.25));
  CHECK(sc.A.upper_ellipticity() == doctest::Approx(0.5));
  CHECK_THROWS_AS(sweep_problem(*cfg.problem, SweepRegime::contrast, 0.5), Error);
}

TEST_CASE("least squares and the constant-gap control") {
  const std::vector<double> x = {3, 4, 5, 6}, one = {1, 1, 1, 1};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 - 1.5 * v);
  const LeastSquaresFit f = least_squares({one, x}, y);
  CHECK(f.coefficients[1] == doctest::Approx(-1.5));
  CHECK(f.r2 == doctest::Approx(1.0));
  const LeastSquaresFit flat = least_squares({one, x}, {0.7, 0.7, 0.7, 0.7});
  CHECK(std::abs(flat.coefficients[1]) < 1e-12);
  CHECK(flat.r2 == 0.0);
}
