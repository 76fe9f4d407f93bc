#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gapcert {

/// Points carry three slots; only the first `dim` are meaningful.
using Point = std::array<double, 3>;

double distance(const Point& a, const Point& b, int dim);

/// Ball or axis-aligned box.
struct Primitive {
  enum class Kind { ball, box };
  Kind kind = Kind::ball;
  Point center{};
  double radius = 0.0;   // ball
  Point half{};          // box half-extents

  static Primitive ball(const Point& c, double r);
  static Primitive box(const Point& lo, const Point& hi);

  /// Negative inside, zero on the boundary.
  double signed_distance(const Point& x, int dim) const;
  /// Support function h(u) = max_{y in P} u.y for a unit vector u.
  double support(const Point& u, int dim) const;
  double volume(int dim) const;
  /// Vertices for boxes, the center for balls.
  std::vector<Point> anchor_points(int dim) const;
  /// Radius of the anchor (0 for boxes).
  double anchor_radius() const { return kind == Kind::ball ? radius : 0.0; }
};

struct BoundingBox {
  Point lo{}, hi{};
};

/// Union of primitives.
struct Region {
  int dim = 2;
  std::vector<Primitive> primitives;

  /// Minimum of the primitive signed distances: exact outside, an inner
  /// approximation inside (still negative exactly on the interior).
  double signed_distance(const Point& x) const;
  bool contains_closed(const Point& x) const { return signed_distance(x) <= 0.0; }
  BoundingBox bounds(double inflate = 0.0) const;
  /// Support function of the convex hull.
  double hull_support(const Point& u) const;
  /// Signed distance to the convex hull.
  double hull_signed_distance(const Point& x) const;
};

enum class FaceCondition { dirichlet, neumann };

/// Box-shaped Omega with a boundary condition per face. Face index 2*i is
/// the lower face along axis i, 2*i+1 the upper one.
struct DomainSpec {
  int dim = 2;
  Point lo{}, hi{};
  std::array<FaceCondition, 6> faces{};

  bool all_dirichlet() const;
  bool all_neumann() const;
  double volume() const;
  /// Distance from an interior point to the boundary.
  double boundary_distance(const Point& x) const;
  void validate() const;
};

/// Convex Omega-hat: either the hull of Omega0 inflated by a clearance, or a
/// single primitive.
struct OmegaHat {
  enum class Kind { hull_inflation, primitive };
  Kind kind = Kind::hull_inflation;
  double clearance = 0.0;
  Primitive shape{};

  double signed_distance(const Point& x, const Region& omega0) const;
  double support(const Point& u, const Region& omega0) const;
  BoundingBox bounds(const Region& omega0, double inflate = 0.0) const;
};

/// Straight admissible cylinder.
struct TubeSpec {
  Point a{}, b{};
  double radius = 0.0;
  double length(int dim) const;
  /// True when x lies in the closed tube (distance to the segment's carrying
  /// line at most r, projection within the segment).
  bool contains(const Point& x, int dim) const;
};

double separation_distance(const Region& omega0, const DomainSpec& omega);

struct TubeParameters {
  double L = 0.0;
  double r0 = 0.0;
};
TubeParameters tube_parameters(const Region& omega0, const OmegaHat& omega_hat);

enum class VolumeMethod { analytic, grid, montecarlo };

struct VolumeEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// |{x : dist(x, Omega0) < t}|. `resolution` is the grid step for the grid
/// method and the sample count for Monte Carlo.
VolumeEstimate neighborhood_volume(const Region& omega0, double t, VolumeMethod method,
                                   double resolution, std::uint64_t seed = 0);

/// Pointwise scalar field.
using ScalarField = std::function<double(const Point&)>;

/// Set of admissible centres given by a signed-distance function.
struct CenterSet {
  std::function<double(const Point&)> signed_distance;
  BoundingBox bounds;
};

struct LocalNormResult {
  double value = 0.0;        // padded supremum
  double raw = 0.0;          // value at the finest level
  double padding = 0.0;      // inter-refinement variation added on top
  Point argmax{};
  int refinements = 0;
  bool converged = false;
};

struct LocalNormOptions {
  double center_step = 0.0;      // lattice step for centres
  double quadrature_step = 0.0;  // midpoint cell size
  int max_refinements = 4;
  double stability = 1e-4;
};

/// sup over centres a of (int_{B_r(a)} |V|^s)^{1/s}, s = `exponent`, by the
/// masked tensor midpoint rule, refined until two successive levels agree.
LocalNormResult local_norm_sup(const ScalarField& V, const CenterSet& centers, double ball_radius,
                               double exponent, int dim, const LocalNormOptions& options);

/// (int_{Omega0} |V|^s)^{1/s} by the masked midpoint rule with refinement;
/// the returned value includes the inter-refinement padding.
double region_norm(const ScalarField& V, const Region& region, double exponent, double step,
                   int max_refinements = 4, double stability = 1e-4);

double straight_tube_volume(const TubeSpec& tube, int dim);

struct AssumptionCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_passed() const;
};

/// Geometric standing assumptions. The spectral ones need eigenvalues and are
/// evaluated later.
AssumptionReport assumption_check(const DomainSpec& omega, const Region& omega0,
                                  const OmegaHat& omega_hat, const ScalarField& V, double sample_step);

}  // namespace gapcert
