#include <cmath>
#include <random>

#include <doctest.h>

#include "gapcert/errors.hpp"
#include "gapcert/geometry.hpp"

using namespace gapcert;

namespace {

DomainSpec box(double half, int dim = 2) {
  DomainSpec d;
  d.dim = dim;
  for (int i = 0; i < dim; ++i) {
    d.lo[i] = -half;
    d.hi[i] = half;
  }
  d.faces.fill(FaceCondition::dirichlet);
  return d;
}

Region disks(std::vector<Point> centers, double r) {
  Region reg;
  reg.dim = 2;
  for (const auto& c : centers) reg.primitives.push_back(Primitive::ball(c, r));
  return reg;
}

OmegaHat inflation(double c) {
  OmegaHat h;
  h.kind = OmegaHat::Kind::hull_inflation;
  h.clearance = c;
  return h;
}

}  // namespace

TEST_CASE("separation distance") {
  CHECK(separation_distance(disks({{0, 0}}, 1), box(3)) == doctest::Approx(2.0));
  CHECK(separation_distance(disks({{-2, 0}, {2, 0}}, 1), box(5)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(separation_distance(disks({{2, 0}}, 1), box(3)), Error);
  try {
    separation_distance(disks({{2, 0}}, 1), box(3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::assumption_violation);
  }
}

TEST_CASE("tube parameters") {
  const TubeParameters t = tube_parameters(disks({{-2, 0}, {2, 0}}, 1), inflation(1));
  CHECK(t.L == doctest::Approx(6.0));
  CHECK(t.r0 == doctest::Approx(1.0));

  OmegaHat big;
  big.kind = OmegaHat::Kind::primitive;
  big.shape = Primitive::ball({0.5, 0}, 3);
  const TubeParameters s = tube_parameters(disks({{0, 0}}, 1.5), big);
  CHECK(s.L == doctest::Approx(3.0));
  CHECK(s.r0 == doctest::Approx(1.0).epsilon(1e-9));

  OmegaHat small;
  small.kind = OmegaHat::Kind::primitive;
  small.shape = Primitive::ball({0, 0}, 1);
  try {
    tube_parameters(disks({{-2, 0}, {2, 0}}, 1), small);
    FAIL("expected geometry_infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::geometry_infeasible);
  }
}

TEST_CASE("tube parameters ignore primitive order") {
  Region a = disks({{-2, 0}, {1, 1}, {2, -1}}, 0.5);
  Region b = disks({{2, -1}, {-2, 0}, {1, 1}}, 0.5);
  const auto ta = tube_parameters(a, inflation(0.5)), tb = tube_parameters(b, inflation(0.5));
  CHECK(ta.L == tb.L);
  CHECK(ta.r0 == tb.r0);
}

TEST_CASE("neighbourhood volume") {
  const Region one = disks({{0, 0}}, 1);
  CHECK(neighborhood_volume(one, 0.5, VolumeMethod::analytic, 0).value == doctest::Approx(2.25 * M_PI));
  const VolumeEstimate g0 = neighborhood_volume(one, 0, VolumeMethod::grid, 0.005);
  CHECK(std::abs(g0.value - M_PI) <= g0.error);

  const Region two = disks({{-2, 0}, {2, 0}}, 1);
  // Disjoint inflated disks: closed form 2 pi 1.25^2.
  const double exact = 2 * M_PI * 1.25 * 1.25;
  const VolumeEstimate g = neighborhood_volume(two, 0.25, VolumeMethod::grid, 0.005);
  const VolumeEstimate mc = neighborhood_volume(two, 0.25, VolumeMethod::montecarlo, 200000, 11);
  CHECK(std::abs(g.value - exact) <= g.error);
  CHECK(std::abs(mc.value - exact) <= 3 * mc.error);
  CHECK_THROWS_AS(neighborhood_volume(two, 0.25, VolumeMethod::analytic, 0), Error);

  double prev = 0;
  for (double t : {0.0, 0.1, 0.3, 0.6}) {
    const VolumeEstimate v = neighborhood_volume(two, t, VolumeMethod::grid, 0.01);
    CHECK(v.value + v.error >= prev);
    prev = v.value - v.error;
  }
}

TEST_CASE("grid and Monte Carlo volumes agree on random disk unions") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2.0, 2.0), R(0.2, 1.0);
  for (int k = 0; k < 10; ++k) {
    Region reg;
    reg.dim = 2;
    for (int i = 0; i < 3; ++i) reg.primitives.push_back(Primitive::ball({U(rng), U(rng)}, R(rng)));
    const VolumeEstimate g = neighborhood_volume(reg, 0.2, VolumeMethod::grid, 0.01);
    const VolumeEstimate m = neighborhood_volume(reg, 0.2, VolumeMethod::montecarlo, 40000, 100 + k);
    CHECK(std::abs(g.value - m.value) <= g.error + 3 * m.error);
  }
}

TEST_CASE("local norm suprema") {
  const Region omega0 = disks({{-2, 0}, {2, 0}}, 0.5);
  CenterSet centers;
  centers.signed_distance = [&](const Point& x) { return omega0.signed_distance(x); };
  centers.bounds = omega0.bounds();
  LocalNormOptions opt;
  opt.center_step = 0.1;
  opt.quadrature_step = 0.02;
  opt.max_refinements = 2;

  const double r = 0.4, s = 2.0;
  const auto c = local_norm_sup([](const Point&) { return 3.0; }, centers, r, s, 2, opt);
  CHECK(c.value == doctest::Approx(3.0 * std::pow(M_PI * r * r, 1 / s)).epsilon(5e-3));
  CHECK(local_norm_sup([](const Point&) { return 0.0; }, centers, r, s, 2, opt).value == 0.0);

  // Two disks of depth 8: a ball of radius 0.875 around a well covers it whole.
  const ScalarField V = [&](const Point& x) { return omega0.signed_distance(x) <= 0 ? -8.0 : 0.0; };
  const auto w = local_norm_sup(V, centers, 0.875, s, 2, opt);
  CHECK(w.value == doctest::Approx(8 * std::sqrt(M_PI / 4)).epsilon(2e-3));

  const ScalarField V2 = [&](const Point& x) { return 2 * V(x); };
  CHECK(local_norm_sup(V2, centers, 0.875, s, 2, opt).raw >= w.raw);
  CHECK(local_norm_sup(V, centers, 0.3, s, 2, opt).raw <= w.raw);
}

TEST_CASE("straight tube volume") {
  TubeSpec t;
  t.a = {0, 0};
  t.b = {4, 0};
  t.radius = 0.1;
  CHECK(straight_tube_volume(t, 2) == doctest::Approx(0.8));
  CHECK(straight_tube_volume(t, 3) == doctest::Approx(M_PI * 0.01 * 4));
  t.b = t.a;
  CHECK(straight_tube_volume(t, 2) == 0.0);

  // Against the midpoint quadrature of the indicator.
  TubeSpec s;
  s.a = {-1, -0.5};
  s.b = {1.5, 0.7};
  s.radius = 0.3;
  const double h = 0.002;
  double vol = 0;
  for (double x = -2 + h / 2; x < 3; x += h)
    for (double y = -1.5 + h / 2; y < 1.5; y += h)
      if (s.contains({x, y}, 2)) vol += h * h;
  CHECK(vol == doctest::Approx(straight_tube_volume(s, 2)).epsilon(5e-3));
}

TEST_CASE("standing assumptions") {
  const DomainSpec om = box(6);
  const Region omega0 = disks({{-2, 0}, {2, 0}}, 0.5);
  const ScalarField V = [&](const Point& x) { return omega0.signed_distance(x) <= 0 ? -8.0 : 0.0; };
  const AssumptionReport ok = assumption_check(om, omega0, inflation(0.5), V, 0.05);
  CHECK(ok.all_passed());

  const AssumptionReport far = assumption_check(om, omega0, inflation(1.5), V, 0.05);
  CHECK_FALSE(far.all_passed());
  for (const auto& c : far.checks)
    if (c.name == "omega_hat_clearance") CHECK_FALSE(c.passed);

  const ScalarField leak = [&](const Point& x) { return omega0.signed_distance(x) <= 0.06 ? -8.0 : 0.0; };
  const AssumptionReport l = assumption_check(om, omega0, inflation(0.5), leak, 0.05);
  for (const auto& c : l.checks)
    if (c.name == "vminus_supported_in_omega0") CHECK_FALSE(c.passed);
}
