#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gapcert/errors.hpp"
#include "gapcert/pde.hpp"

namespace gapcert {

void normalize_second(EigenResult& r, const Region& omega0) {
  double mx = -std::numeric_limits<double>::infinity();
  double mn = std::numeric_limits<double>::infinity();
  for (long node = 0; node < r.grid.total(); ++node) {
    if (omega0.signed_distance(r.grid.position(node)) > 1e-12) continue;
    mx = std::max(mx, r.psi1[node]);
    mn = std::min(mn, r.psi1[node]);
  }
  if (!std::isfinite(mx)) throw Error(ErrorKind::invalid_input, "Omega0 contains no grid point");
  // Flip only on a clear majority so that a normalized field stays put.
  if (-mn > mx + 1e-12 * std::max(std::abs(mx), std::abs(mn))) {
    for (double& x : r.psi1) x = -x;
    mx = -mn;
  }
  if (!(mx > 0)) throw Error(ErrorKind::invalid_input, "second eigenfunction vanishes on Omega0");
  if (mx != 1.0)
    for (double& x : r.psi1) x /= mx;
  r.psi1_normalized = true;
}

GroundStateReport ground_state_diagnostics(const EigenResult& r, const Region& omega0, const OmegaHat& omega_hat,
                                           double d, const LogValue& C2, double tol) {
  GroundStateReport rep;
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (long node = 0; node < r.grid.total(); ++node) {
    if (r.quadrature[node] <= 0) continue;
    mx = std::max(mx, r.psi0[node]);
    mn = std::min(mn, r.psi0[node]);
  }
  rep.min_relative = mx > 0 ? mn / mx : -1.0;
  if (rep.min_relative < -tol) {
    std::ostringstream os;
    os << "ground state changes sign: min/max = " << rep.min_relative;
    throw Error(ErrorKind::positivity_violation, os.str());
  }
  rep.sign_pure = rep.min_relative > 0;

  const BoundingBox bb = omega_hat.bounds(omega0, d / 8);
  double sup = 0.0, inf = std::numeric_limits<double>::infinity();
  for (long node = 0; node < r.grid.total(); ++node) {
    if (r.quadrature[node] <= 0) continue;
    const Point x = r.grid.position(node);
    bool in_box = true;
    for (int i = 0; i < r.grid.dim; ++i) in_box = in_box && x[i] >= bb.lo[i] && x[i] <= bb.hi[i];
    if (!in_box || omega_hat.signed_distance(x, omega0) > d / 8) continue;
    sup = std::max(sup, r.psi0[node]);
    inf = std::min(inf, r.psi0[node]);
    ++rep.harnack_points;
  }
  rep.harnack_ratio = inf > 0 ? sup / inf : std::numeric_limits<double>::infinity();
  rep.log10_harnack_ratio = std::log10(rep.harnack_ratio);
  rep.log10_C2 = C2.log10_string(20);
  rep.harnack_within_C2 = rep.harnack_points > 0 && std::isfinite(rep.log10_harnack_ratio) &&
                          BigFloat(rep.log10_harnack_ratio, C2.precision()) <= C2.log10_abs();
  return rep;
}

SecondEigenfunctionReport second_eigenfunction_diagnostics(const EigenResult& r, const Region& omega0,
                                                           const LogValue& C18, double node_eps, double max_eps) {
  if (!(r.lambda1 < 0)) {
    std::ostringstream os;
    os << "second eigenvalue " << r.lambda1 << " is not negative; the certificate does not apply";
    throw Error(ErrorKind::hypothesis_violation, os.str());
  }
  if (!r.psi1_normalized) throw Error(ErrorKind::invalid_input, "second eigenfunction not normalized");
  SecondEigenfunctionReport rep;
  rep.min_in_omega0 = std::numeric_limits<double>::infinity();
  for (long node = 0; node < r.grid.total(); ++node) {
    rep.global_max_abs = std::max(rep.global_max_abs, std::abs(r.psi1[node]));
    if (omega0.signed_distance(r.grid.position(node)) <= 1e-12)
      rep.min_in_omega0 = std::min(rep.min_in_omega0, r.psi1[node]);
  }
  rep.node_check = rep.min_in_omega0 <= node_eps;
  rep.max_check = rep.global_max_abs <= 1.0 + max_eps;
  rep.l2_norm_squared = l2_norm_squared(r, r.psi1);
  const unsigned prec = C18.precision();
  const BigFloat limit = C18.log10_abs() - BigFloat(std::log10(std::abs(r.lambda1)), prec);
  rep.log10_l2_limit = limit.to_decimal(17);
  rep.l2_check = BigFloat(std::log10(rep.l2_norm_squared), prec) <= limit;
  return rep;
}

GapFormulaTerms gap_formula_rhs(const EigenResult& r, const TubeSpec& tube, double nu) {
  const GridInfo& g = r.grid;
  const int dim = g.dim;
  GapFormulaTerms t;
  t.inf_psi0 = std::numeric_limits<double>::infinity();
  std::vector<long> pts;
  for (long node = 0; node < g.total(); ++node)
    if (tube.contains(g.position(node), dim)) pts.push_back(node);
  if (pts.empty()) throw Error(ErrorKind::geometry_infeasible, "tube contains no grid point");
  const long stride[3] = {1, g.nodes[0], g.nodes[0] * g.nodes[1]};
  const double cell = std::pow(g.h, dim);
  for (long node : pts) {
    const auto c = g.coords(node);
    double grad2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      if (c[a] == 0 || c[a] == g.nodes[a] - 1)
        throw Error(ErrorKind::geometry_infeasible, "tube exits the grid");
      const long p = node + stride[a], m = node - stride[a];
      if (r.quadrature[p] <= 0 || r.quadrature[m] <= 0 || r.psi0[p] <= 0 || r.psi0[m] <= 0)
        throw Error(ErrorKind::geometry_infeasible, "tube touches eliminated boundary nodes");
      const double gp = r.psi1[p] / r.psi0[p], gm = r.psi1[m] / r.psi0[m];
      const double dd = (gp - gm) / (2 * g.h);
      grad2 += dd * dd;
    }
    t.grad_l1 += std::sqrt(grad2) * cell;
    t.inf_psi0 = std::min(t.inf_psi0, r.psi0[node]);
  }
  if (!(t.inf_psi0 > 0)) throw Error(ErrorKind::positivity_violation, "ground state not positive on the tube");
  t.tube_points = static_cast<long>(pts.size());
  t.tube_volume = straight_tube_volume(tube, dim);
  t.psi1_l2_squared = l2_norm_squared(r, r.psi1);
  t.rhs = nu * t.inf_psi0 * t.inf_psi0 / (t.tube_volume * t.psi1_l2_squared) * t.grad_l1 * t.grad_l1;
  return t;
}

}  // namespace gapcert
