#include "gapcert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

double ball_volume_d(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

Point angle_dir(double t) { return Point{std::cos(t), std::sin(t), 0.0}; }

Point sphere_dir(double theta, double phi) {
  return Point{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Maximizes f over unit vectors: coarse sampling, then a local search around
// the best sample.
double maximize_over_sphere(int dim, const std::function<double(const Point&)>& f) {
  if (dim == 1) return std::max(f(Point{1.0, 0.0, 0.0}), f(Point{-1.0, 0.0, 0.0}));
  if (dim == 2) {
    const int m = 128;
    const double step = 2.0 * std::numbers::pi / m;
    double best = -kInf, best_t = 0.0;
    for (int k = 0; k < m; ++k) {
      const double v = f(angle_dir(k * step));
      if (v > best) {
        best = v;
        best_t = k * step;
      }
    }
    // golden-section search on [best_t - step, best_t + step]
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best_t - step, b = best_t + step;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(angle_dir(x1)), f2 = f(angle_dir(x2));
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = f(angle_dir(x2));
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = f(angle_dir(x1));
      }
    }
    return std::max({best, f1, f2});
  }
  // dim == 3: Fibonacci lattice, then pattern search in (theta, phi).
  const int m = 1024;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best = -kInf, bt = 0.0, bp = 0.0;
  for (int k = 0; k < m; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / m;
    const double theta = std::acos(z);
    const double phi = golden * k;
    const double v = f(sphere_dir(theta, phi));
    if (v > best) {
      best = v;
      bt = theta;
      bp = phi;
    }
  }
  double h = 0.1;
  while (h > 1e-12) {
    bool moved = false;
    const double cand[4][2] = {{h, 0}, {-h, 0}, {0, h}, {0, -h}};
    for (const auto& c : cand) {
      const double v = f(sphere_dir(bt + c[0], bp + c[1]));
      if (v > best) {
        best = v;
        bt += c[0];
        bp += c[1];
        moved = true;
        break;
      }
    }
    if (!moved) h *= 0.5;
  }
  return best;
}

}  // namespace

double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Primitive Primitive::ball(const Point& c, double r) {
  Primitive p;
  p.kind = Kind::ball;
  p.center = c;
  p.radius = r;
  return p;
}

Primitive Primitive::box(const Point& lo, const Point& hi) {
  Primitive p;
  p.kind = Kind::box;
  for (int i = 0; i < 3; ++i) {
    p.center[i] = 0.5 * (lo[i] + hi[i]);
    p.half[i] = 0.5 * (hi[i] - lo[i]);
  }
  return p;
}

double Primitive::signed_distance(const Point& x, int dim) const {
  if (kind == Kind::ball) return distance(x, center, dim) - radius;
  double outside = 0.0, inside = -kInf;
  for (int i = 0; i < dim; ++i) {
    const double q = std::abs(x[i] - center[i]) - half[i];
    outside += q > 0 ? q * q : 0.0;
    inside = std::max(inside, q);
  }
  return outside > 0 ? std::sqrt(outside) : inside;
}

double Primitive::support(const Point& u, int dim) const {
  double s = dot(u, center, dim);
  if (kind == Kind::ball) return s + radius;
  for (int i = 0; i < dim; ++i) s += std::abs(u[i]) * half[i];
  return s;
}

double Primitive::volume(int dim) const {
  if (kind == Kind::ball) return ball_volume_d(dim) * std::pow(radius, dim);
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= 2.0 * half[i];
  return v;
}

std::vector<Point> Primitive::anchor_points(int dim) const {
  if (kind == Kind::ball) return {center};
  std::vector<Point> out;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Point p = center;
    for (int i = 0; i < dim; ++i) p[i] += (mask >> i & 1) ? half[i] : -half[i];
    out.push_back(p);
  }
  return out;
}

double Region::signed_distance(const Point& x) const {
  double s = kInf;
  for (const auto& p : primitives) s = std::min(s, p.signed_distance(x, dim));
  return s;
}

BoundingBox Region::bounds(double inflate) const {
  BoundingBox b;
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = kInf;
    b.hi[i] = -kInf;
  }
  for (const auto& p : primitives) {
    for (int i = 0; i < dim; ++i) {
      const double ext = p.kind == Primitive::Kind::ball ? p.radius : p.half[i];
      b.lo[i] = std::min(b.lo[i], p.center[i] - ext - inflate);
      b.hi[i] = std::max(b.hi[i], p.center[i] + ext + inflate);
    }
  }
  return b;
}

double Region::hull_support(const Point& u) const {
  double s = -kInf;
  for (const auto& p : primitives) s = std::max(s, p.support(u, dim));
  return s;
}

double Region::hull_signed_distance(const Point& x) const {
  if (primitives.size() == 1) return primitives.front().signed_distance(x, dim);
  return maximize_over_sphere(dim, [&](const Point& u) { return dot(u, x, dim) - hull_support(u); });
}

bool DomainSpec::all_dirichlet() const {
  for (int f = 0; f < 2 * dim; ++f)
    if (faces[f] != FaceCondition::dirichlet) return false;
  return true;
}

bool DomainSpec::all_neumann() const {
  for (int f = 0; f < 2 * dim; ++f)
    if (faces[f] != FaceCondition::neumann) return false;
  return true;
}

double DomainSpec::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
  return v;
}

double DomainSpec::boundary_distance(const Point& x) const {
  double d = kInf;
  for (int i = 0; i < dim; ++i) d = std::min({d, x[i] - lo[i], hi[i] - x[i]});
  return d;
}

void DomainSpec::validate() const {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::invalid_input, "domain dimension must be 1, 2 or 3");
  for (int i = 0; i < dim; ++i)
    if (!(hi[i] > lo[i])) throw Error(ErrorKind::invalid_input, "domain box has empty interior");
}

double OmegaHat::signed_distance(const Point& x, const Region& omega0) const {
  if (kind == Kind::primitive) return shape.signed_distance(x, omega0.dim);
  return omega0.hull_signed_distance(x) - clearance;
}

double OmegaHat::support(const Point& u, const Region& omega0) const {
  if (kind == Kind::primitive) return shape.support(u, omega0.dim);
  return omega0.hull_support(u) + clearance;
}

BoundingBox OmegaHat::bounds(const Region& omega0, double inflate) const {
  if (kind == Kind::hull_inflation) return omega0.bounds(clearance + inflate);
  Region r{omega0.dim, {shape}};
  return r.bounds(inflate);
}

double TubeSpec::length(int dim) const { return distance(a, b, dim); }

bool TubeSpec::contains(const Point& x, int dim) const {
  const double ell = length(dim);
  if (ell == 0.0) return distance(x, a, dim) <= radius;
  double t = 0.0;
  for (int i = 0; i < dim; ++i) t += (x[i] - a[i]) * (b[i] - a[i]) / ell;
  if (t < -1e-12 * ell || t > ell * (1 + 1e-12)) return false;
  double perp2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double c = a[i] + t * (b[i] - a[i]) / ell;
    perp2 += (x[i] - c) * (x[i] - c);
  }
  return std::sqrt(perp2) <= radius * (1 + 1e-12);
}

double separation_distance(const Region& omega0, const DomainSpec& omega) {
  if (omega0.primitives.empty()) throw Error(ErrorKind::invalid_input, "Omega0 has no primitives");
  double d = kInf;
  for (const auto& p : omega0.primitives) {
    for (int i = 0; i < omega.dim; ++i) {
      const double ext = p.kind == Primitive::Kind::ball ? p.radius : p.half[i];
      d = std::min({d, p.center[i] - ext - omega.lo[i], omega.hi[i] - p.center[i] - ext});
    }
  }
  if (!(d > 0)) {
    throw Error(ErrorKind::assumption_violation,
                "Omega0 touches or leaves the boundary of Omega (d = " + std::to_string(d) + ")");
  }
  return d;
}

TubeParameters tube_parameters(const Region& omega0, const OmegaHat& omega_hat) {
  const int dim = omega0.dim;
  TubeParameters out;
  // Diameter of the union: farthest anchor pair plus both radii.
  for (size_t i = 0; i < omega0.primitives.size(); ++i) {
    for (size_t j = i; j < omega0.primitives.size(); ++j) {
      const auto& P = omega0.primitives[i];
      const auto& Q = omega0.primitives[j];
      for (const auto& a : P.anchor_points(dim))
        for (const auto& b : Q.anchor_points(dim))
          out.L = std::max(out.L, distance(a, b, dim) + P.anchor_radius() + Q.anchor_radius());
    }
  }
  if (omega_hat.kind == OmegaHat::Kind::hull_inflation) {
    out.r0 = omega_hat.clearance;
  } else {
    // Largest r with hull(Omega0) + B_r inside the convex Omega-hat.
    out.r0 = -maximize_over_sphere(dim, [&](const Point& u) {
      return omega0.hull_support(u) - omega_hat.shape.support(u, dim);
    });
  }
  if (!(out.r0 > 0)) {
    throw Error(ErrorKind::geometry_infeasible,
                "no straight tube of positive radius fits: Omega-hat does not contain the hull of Omega0 "
                "with clearance (r0 = " + std::to_string(out.r0) + ")");
  }
  return out;
}

VolumeEstimate neighborhood_volume(const Region& omega0, double t, VolumeMethod method, double resolution,
                                   std::uint64_t seed) {
  if (t < 0) throw Error(ErrorKind::invalid_input, "neighbourhood radius must be nonnegative");
  const int dim = omega0.dim;
  if (method == VolumeMethod::analytic) {
    if (omega0.primitives.size() != 1 || omega0.primitives[0].kind != Primitive::Kind::ball) {
      throw Error(ErrorKind::unsupported_method, "analytic neighbourhood volume needs a single ball");
    }
    return {ball_volume_d(dim) * std::pow(omega0.primitives[0].radius + t, dim), 0.0};
  }
  const BoundingBox bb = omega0.bounds(t);
  if (method == VolumeMethod::grid) {
    const double h = resolution;
    if (!(h > 0)) throw Error(ErrorKind::invalid_input, "grid step must be positive");
    std::array<long, 3> cnt{1, 1, 1};
    for (int i = 0; i < dim; ++i) cnt[i] = static_cast<long>(std::ceil((bb.hi[i] - bb.lo[i]) / h)) + 2;
    const double cell = std::pow(h, dim);
    const double band = 0.5 * h * std::sqrt(static_cast<double>(dim));
    double inside = 0.0, straddle = 0.0;
    Point x{};
    for (long k = 0; k < cnt[2]; ++k) {
      if (dim > 2) x[2] = bb.lo[2] - h + (k + 0.5) * h;
      for (long j = 0; j < cnt[1]; ++j) {
        if (dim > 1) x[1] = bb.lo[1] - h + (j + 0.5) * h;
        for (long i = 0; i < cnt[0]; ++i) {
          x[0] = bb.lo[0] - h + (i + 0.5) * h;
          const double s = omega0.signed_distance(x);
          if (s < t) inside += 1.0;
          if (std::abs(s - t) <= band) straddle += 1.0;
        }
      }
    }
    return {inside * cell, straddle * cell};
  }
  // Monte Carlo over the bounding box.
  const long samples = static_cast<long>(resolution);
  if (samples < 1) throw Error(ErrorKind::invalid_input, "Monte Carlo needs at least one sample");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  double box_vol = 1.0;
  for (int i = 0; i < dim; ++i) box_vol *= bb.hi[i] - bb.lo[i];
  long hits = 0;
  Point x{};
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < dim; ++i) x[i] = bb.lo[i] + (bb.hi[i] - bb.lo[i]) * uniform();
    if (omega0.signed_distance(x) < t) ++hits;
  }
  const double phat = static_cast<double>(hits) / samples;
  return {box_vol * phat, box_vol * std::sqrt(phat * (1 - phat) / samples)};
}

namespace {

// Midpoint-rule data: |V|^s at cell centres with prefix sums along x.
struct QuadratureGrid {
  int dim = 2;
  double h = 0.0;
  Point origin{};  // lower corner of cell (0,0,0)
  std::array<long, 3> cnt{1, 1, 1};
  std::vector<double> prefix;  // per (y,z) line, cnt[0]+1 entries

  QuadratureGrid(const ScalarField& V, double exponent, int dim_, const BoundingBox& bb, double step)
      : dim(dim_), h(step) {
    for (int i = 0; i < dim; ++i) {
      origin[i] = bb.lo[i] - h;
      cnt[i] = static_cast<long>(std::ceil((bb.hi[i] - bb.lo[i]) / h)) + 2;
    }
    const long lines = cnt[1] * cnt[2];
    prefix.assign(lines * (cnt[0] + 1), 0.0);
    Point x{};
    for (long k = 0; k < cnt[2]; ++k) {
      if (dim > 2) x[2] = origin[2] + (k + 0.5) * h;
      for (long j = 0; j < cnt[1]; ++j) {
        if (dim > 1) x[1] = origin[1] + (j + 0.5) * h;
        double* row = &prefix[(k * cnt[1] + j) * (cnt[0] + 1)];
        row[0] = 0.0;
        for (long i = 0; i < cnt[0]; ++i) {
          x[0] = origin[0] + (i + 0.5) * h;
          row[i + 1] = row[i] + std::pow(std::abs(V(x)), exponent);
        }
      }
    }
  }

  // Sum of the samples on line (j,k) with cell centre x in [a, b].
  double line_sum(long j, long k, double a, double b) const {
    long lo = static_cast<long>(std::ceil((a - origin[0]) / h - 0.5));
    long hi = static_cast<long>(std::floor((b - origin[0]) / h - 0.5));
    lo = std::max(lo, 0L);
    hi = std::min(hi, cnt[0] - 1);
    if (hi < lo) return 0.0;
    const double* row = &prefix[(k * cnt[1] + j) * (cnt[0] + 1)];
    return row[hi + 1] - row[lo];
  }

  // Integral of |V|^s over the ball B_r(a) (masked midpoint rule).
  double ball_integral(const Point& a, double r) const {
    double sum = 0.0;
    auto span = [&](int axis, double c, long& lo, long& hi) {
      lo = std::max(0L, static_cast<long>(std::ceil((c - r - origin[axis]) / h - 0.5)));
      hi = std::min(cnt[axis] - 1, static_cast<long>(std::floor((c + r - origin[axis]) / h - 0.5)));
    };
    if (dim == 1) return line_sum(0, 0, a[0] - r, a[0] + r) * h;
    long jlo, jhi, klo = 0, khi = 0;
    span(1, a[1], jlo, jhi);
    if (dim > 2) span(2, a[2], klo, khi);
    for (long k = klo; k <= khi; ++k) {
      const double dz = dim > 2 ? origin[2] + (k + 0.5) * h - a[2] : 0.0;
      for (long j = jlo; j <= jhi; ++j) {
        const double dy = origin[1] + (j + 0.5) * h - a[1];
        const double w2 = r * r - dy * dy - dz * dz;
        if (w2 < 0) continue;
        const double w = std::sqrt(w2);
        sum += line_sum(j, k, a[0] - w, a[0] + w);
      }
    }
    return sum * std::pow(h, dim);
  }
};

template <class F>
void for_each_lattice_point(int dim, const BoundingBox& bb, double step, F&& f) {
  std::array<long, 3> cnt{1, 1, 1};
  for (int i = 0; i < dim; ++i) cnt[i] = static_cast<long>(std::floor((bb.hi[i] - bb.lo[i]) / step)) + 1;
  Point x{};
  for (long k = 0; k < cnt[2]; ++k) {
    if (dim > 2) x[2] = bb.lo[2] + k * step;
    for (long j = 0; j < cnt[1]; ++j) {
      if (dim > 1) x[1] = bb.lo[1] + j * step;
      for (long i = 0; i < cnt[0]; ++i) {
        x[0] = bb.lo[0] + i * step;
        f(x);
      }
    }
  }
}

}  // namespace

LocalNormResult local_norm_sup(const ScalarField& V, const CenterSet& centers, double ball_radius,
                               double exponent, int dim, const LocalNormOptions& options) {
  if (!(ball_radius > 0)) throw Error(ErrorKind::invalid_input, "ball radius must be positive");
  if (!(exponent > 0)) throw Error(ErrorKind::invalid_input, "norm exponent must be positive");
  double cstep = options.center_step > 0 ? options.center_step : ball_radius / 10;
  double qstep = options.quadrature_step > 0 ? options.quadrature_step : ball_radius / 16;
  BoundingBox qbb = centers.bounds;
  for (int i = 0; i < dim; ++i) {
    qbb.lo[i] -= ball_radius;
    qbb.hi[i] += ball_radius;
  }
  LocalNormResult res;
  double prev = -1.0;
  for (int level = 0; level <= options.max_refinements; ++level) {
    const QuadratureGrid grid(V, exponent, dim, qbb, qstep);
    double best = 0.0;
    Point arg = centers.bounds.lo;
    bool any = false;
    for_each_lattice_point(dim, centers.bounds, cstep, [&](const Point& a) {
      if (centers.signed_distance(a) > 0) return;
      any = true;
      const double v = grid.ball_integral(a, ball_radius);
      if (v > best) {
        best = v;
        arg = a;
      }
    });
    if (!any) throw Error(ErrorKind::invalid_input, "centre set contains no lattice point");
    const double value = std::pow(best, 1.0 / exponent);
    res.raw = value;
    res.argmax = arg;
    res.refinements = level;
    if (prev >= 0) {
      res.padding = std::abs(value - prev);
      if (res.padding <= options.stability * std::max(value, 1e-300)) {
        res.converged = true;
        break;
      }
    }
    prev = value;
    cstep *= 0.5;
    qstep *= 0.5;
  }
  if (res.raw == 0.0) res.converged = true;
  res.value = res.raw + res.padding;
  return res;
}

double region_norm(const ScalarField& V, const Region& region, double exponent, double step,
                   int max_refinements, double stability) {
  const int dim = region.dim;
  const BoundingBox bb = region.bounds();
  double prev = -1.0, value = 0.0, pad = 0.0;
  for (int level = 0; level <= max_refinements; ++level) {
    const double h = step / (1 << level);
    double sum = 0.0;
    BoundingBox cells = bb;
    for (int i = 0; i < dim; ++i) cells.lo[i] = bb.lo[i] + 0.5 * h;
    for_each_lattice_point(dim, cells, h, [&](const Point& x) {
      if (region.signed_distance(x) <= 0) sum += std::pow(std::abs(V(x)), exponent);
    });
    value = std::pow(sum * std::pow(h, dim), 1.0 / exponent);
    if (prev >= 0) {
      pad = std::abs(value - prev);
      if (pad <= stability * std::max(value, 1e-300)) break;
    }
    prev = value;
  }
  return value + pad;
}

double straight_tube_volume(const TubeSpec& tube, int dim) {
  if (!(tube.radius > 0)) throw Error(ErrorKind::invalid_input, "tube radius must be positive");
  return ball_volume_d(dim - 1) * std::pow(tube.radius, dim - 1) * tube.length(dim);
}

bool AssumptionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

AssumptionReport assumption_check(const DomainSpec& omega, const Region& omega0, const OmegaHat& omega_hat,
                                  const ScalarField& V, double sample_step) {
  AssumptionReport rep;
  const int dim = omega.dim;

  double d = 0.0;
  try {
    d = separation_distance(omega0, omega);
  } catch (const Error&) {
    d = 0.0;
  }
  rep.checks.push_back({"separation_positive", d > 0, d, "dist(Omega0, boundary of Omega) > 0"});

  // Omega0 inside Omega-hat: h_P(u) <= h_hat(u) for every primitive and direction.
  double excess = -kInf;
  for (const auto& p : omega0.primitives) {
    excess = std::max(excess, maximize_over_sphere(dim, [&](const Point& u) {
                        return p.support(u, dim) - omega_hat.support(u, omega0);
                      }));
  }
  rep.checks.push_back({"omega0_inside_omega_hat", excess <= 1e-12, excess,
                        "max over directions of support(Omega0) - support(Omega-hat)"});

  double clearance = kInf;
  for (int i = 0; i < dim; ++i) {
    Point e{};
    e[i] = 1.0;
    const double up = omega_hat.support(e, omega0);
    e[i] = -1.0;
    const double down = -omega_hat.support(e, omega0);
    clearance = std::min({clearance, omega.hi[i] - up, down - omega.lo[i]});
  }
  rep.checks.push_back({"omega_hat_clearance", d > 0 && clearance >= 0.75 * d - 1e-12, clearance,
                        "dist(Omega-hat, boundary of Omega) >= 3d/4"});

  rep.checks.push_back({"omega_hat_path_connected", true, 1.0, "convex by construction"});

  long leaks = 0;
  BoundingBox bb;
  bb.lo = omega.lo;
  bb.hi = omega.hi;
  for_each_lattice_point(dim, bb, sample_step, [&](const Point& x) {
    if (V(x) < 0 && omega0.signed_distance(x) > 1e-12) ++leaks;
  });
  rep.checks.push_back({"vminus_supported_in_omega0", leaks == 0, static_cast<double>(leaks),
                        "sampling points outside Omega0 with V < 0"});
  return rep;
}

}  // namespace gapcert
