#include "gapcert/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void add(ValidationRecord& r, std::string name, bool ok, std::string detail) {
  r.checks.push_back({std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)});
}

void skip(ValidationRecord& r, std::string name, std::string why) {
  r.checks.push_back({std::move(name), CheckStatus::skip, std::move(why)});
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skip: return "skip";
  }
  return "unknown";
}

std::pair<double, double> ellipticity_bounds(const ProblemConfig& p, const CertificateConfig& c, bool* bumped) {
  const double lo = p.A.lower_ellipticity();
  const double hi = p.A.upper_ellipticity();
  double nu = lo, mu = hi;
  if (c.nu) {
    if (*c.nu > lo) throw Error(ErrorKind::config_error, "certificate.nu exceeds the smallest eigenvalue of A");
    nu = *c.nu;
  }
  if (c.mu) {
    if (*c.mu < hi) throw Error(ErrorKind::config_error, "certificate.mu is below the largest eigenvalue of A");
    mu = *c.mu;
  }
  bool b = false;
  if (!(mu > nu)) {
    mu = nu * (1 + 1e-6);
    b = true;
  }
  if (bumped) *bumped = b;
  return {nu, mu};
}

Measurements measure(const ProblemConfig& p, const CertificateConfig& c) {
  Measurements m;
  const int dim = p.domain.dim;
  const ScalarField V = [&](const Point& x) { return p.V(x); };
  const ScalarField Vminus = [&](const Point& x) { return p.V.negative_part(x); };

  CertificateInputs& in = m.inputs;
  in.n = dim;
  in.q = c.q;
  in.variant = c.variant;
  in.dirichlet_everywhere = p.domain.all_dirichlet();
  std::tie(in.nu, in.mu) = ellipticity_bounds(p, c, &m.mu_bumped);

  in.d = separation_distance(p.omega0, p.domain);
  const double d = in.d;
  m.assumptions = assumption_check(p.domain, p.omega0, p.omega_hat, V, d / 40);

  const TubeParameters tp = tube_parameters(p.omega0, p.omega_hat);
  in.L = tp.L;
  m.clearance_r0 = tp.r0;
  in.r0 = std::min(tp.r0, d);

  m.volume = neighborhood_volume(p.omega0, d / 4, VolumeMethod::grid, d * c.volume_step_fraction);
  in.vol_Omega0_d4 = m.volume.value + m.volume.error;

  const double s = c.q / 2;
  LocalNormOptions opt;
  opt.max_refinements = c.max_refinements;
  opt.center_step = d * c.center_step_fraction;

  CenterSet hat;
  hat.signed_distance = [&](const Point& x) { return p.omega_hat.signed_distance(x, p.omega0) - d / 4; };
  hat.bounds = p.omega_hat.bounds(p.omega0, d / 4);
  opt.quadrature_step = (d / 4) / 16;
  m.local_V = local_norm_sup(V, hat, d / 4, s, dim, opt);
  in.sup_local_V = m.local_V.value;

  CenterSet zero;
  zero.signed_distance = [&](const Point& x) { return p.omega0.signed_distance(x); };
  zero.bounds = p.omega0.bounds();
  opt.quadrature_step = (d / 2) / 16;
  m.local_Vminus = local_norm_sup(Vminus, zero, d / 2, s, dim, opt);
  in.sup_local_Vminus = m.local_Vminus.value;

  in.norm_Vminus_Omega0 = region_norm(Vminus, p.omega0, s, d * c.norm_step_fraction, c.max_refinements);
  in.validate();
  return m;
}

TubeSpec default_tube(const ProblemConfig& p, double r0) {
  if (p.tube) {
    TubeSpec t = *p.tube;
    if (!(t.radius > 0)) t.radius = r0;
    return t;
  }
  TubeSpec t;
  t.radius = r0;
  const auto& prims = p.omega0.primitives;
  if (prims.size() >= 2) {
    t.a = prims[0].center;
    t.b = prims[1].center;
  } else {
    const Primitive& q = prims.front();
    const double ext = q.kind == Primitive::Kind::ball ? q.radius : q.half[0];
    t.a = t.b = q.center;
    t.a[0] -= ext;
    t.b[0] += ext;
  }
  return t;
}

EigenResult solve_problem(const ProblemConfig& p, const SolverConfig& s, double nu, double mu) {
  EllipticProblem prob;
  prob.domain = p.domain;
  prob.A = p.A;
  prob.V = p.V;
  prob.nu = nu;
  prob.mu = mu;
  const DiscreteOperator op = assemble(prob, s.h, s.averaging);
  EigenOptions eo;
  eo.tol = s.tol;
  eo.seed = s.seed;
  eo.max_iterations = s.max_iterations;
  return lowest_eigenpairs(op, 2, eo);
}

const Check* ValidationRecord::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ValidationRecord::check_flags() const {
  std::string out;
  for (const auto& c : checks) {
    if (!out.empty()) out += ';';
    out += c.name;
    out += '=';
    out += c.status == CheckStatus::pass ? 'P' : c.status == CheckStatus::fail ? 'F' : 'S';
  }
  return out;
}

ValidationRecord certify_and_solve(const ProblemConfig& p, const CertificateConfig& c, const SolverConfig& s,
                                   EigenResult* fields) {
  ValidationRecord r;
  r.measurements = measure(p, c);
  const Measurements& m = r.measurements;
  const CertificateInputs& in = m.inputs;

  if (!m.assumptions.all_passed()) {
    std::string failed;
    for (const auto& a : m.assumptions.checks)
      if (!a.passed) failed += (failed.empty() ? "" : ", ") + a.name + " (measured " + fmt(a.measured) + ")";
    throw Error(ErrorKind::assumption_violation, "standing assumptions fail: " + failed);
  }
  for (const auto& a : m.assumptions.checks) add(r, a.name, a.passed, a.detail + "; measured " + fmt(a.measured));
  const auto leak = std::find_if(m.assumptions.checks.begin(), m.assumptions.checks.end(),
                                 [](const AssumptionCheck& a) { return a.name == "vminus_supported_in_omega0"; });
  add(r, "comparison_operator_nonnegative", leak != m.assumptions.checks.end() && leak->passed,
      "V >= 0 outside Omega0 at every sample, so the comparison operator is nonnegative");

  const unsigned prec = c.precision;
  r.chain = constant_chain(in, prec);
  r.section5 = section5_chain(in, prec);
  r.cross_path_max = std::max({relative_log_difference(r.chain.c2, r.section5.as_c2()),
                               relative_log_difference(r.chain.c7, r.section5.as_c7()),
                               relative_log_difference(r.chain.c8, r.section5.as_c8()),
                               relative_log_difference(r.chain.c9, r.section5.as_c9())});
  add(r, "cross_path", r.cross_path_max <= 1e-10, "max relative log difference " + fmt(r.cross_path_max));

  EigenResult e = solve_problem(p, s, in.nu, in.mu);
  r.lambda0 = e.lambda0;
  r.lambda1 = e.lambda1;
  r.residual0 = e.residual0;
  r.residual1 = e.residual1;
  r.iterations = e.iterations;
  r.degenerate = e.degenerate;
  r.tube = default_tube(p, in.r0);

  r.in_hypotheses = e.lambda0 < e.lambda1 && e.lambda1 < 0;
  add(r, "spectral_hypothesis", r.in_hypotheses,
      "lambda0 = " + fmt(e.lambda0) + ", lambda1 = " + fmt(e.lambda1) + "; need lambda0 < lambda1 < 0");
  if (e.lambda1 != 0) r.relative_gap = (e.lambda1 - e.lambda0) / std::abs(e.lambda1);

  if (!r.in_hypotheses) {
    for (const char* n : {"main_inequality", "ground_state_sign", "harnack", "node", "max_normalization",
                          "normalization_idempotent", "l2_bound", "gap_formula_chain", "bound_below_formula"})
      skip(r, n, "outside the certified regime");
    if (fields) *fields = std::move(e);
    return r;
  }

  const BigFloat l10_bound = r.chain.bound.log10_abs();
  const double l10_gap = std::log10(r.relative_gap);
  add(r, "main_inequality", r.chain.bound.sign() > 0 && BigFloat(l10_gap, prec) >= l10_bound,
      "log10(relative gap) = " + fmt(l10_gap) + " vs " + render_log10(l10_bound, "bound"));

  r.ground = ground_state_diagnostics(e, p.omega0, p.omega_hat, in.d, r.section5.C2, s.tol);
  add(r, "ground_state_sign", r.ground->sign_pure, "min/max of psi0 = " + fmt(r.ground->min_relative));
  add(r, "harnack", r.ground->harnack_within_C2,
      "log10(sup/inf on Omega-hat_{d/8}) = " + fmt(r.ground->log10_harnack_ratio) + " vs log10(C2) = " +
          r.ground->log10_C2);

  normalize_second(e, p.omega0);
  const std::vector<double> once = e.psi1;
  normalize_second(e, p.omega0);
  add(r, "normalization_idempotent", once == e.psi1, "second normalization leaves psi1 unchanged");

  if (r.degenerate) {
    for (const char* n : {"node", "max_normalization", "l2_bound", "gap_formula_chain", "bound_below_formula"})
      skip(r, n, "second eigenvalue numerically degenerate");
  } else {
    r.second = second_eigenfunction_diagnostics(e, p.omega0, r.chain.C18);
    add(r, "node", r.second->node_check, "min of psi1 on Omega0 = " + fmt(r.second->min_in_omega0));
    add(r, "max_normalization", r.second->max_check, "max |psi1| = " + fmt(r.second->global_max_abs));
    add(r, "l2_bound", r.second->l2_check,
        "log10 ||psi1||^2 = " + fmt(std::log10(r.second->l2_norm_squared)) + " vs log10(C18/|lambda1|) = " +
            r.second->log10_l2_limit);

    r.gap_terms = gap_formula_rhs(e, r.tube, in.nu);
    const double gap = e.lambda1 - e.lambda0;
    add(r, "gap_formula_chain", gap >= 0.95 * r.gap_terms->rhs,
        "gap = " + fmt(gap) + ", formula rhs = " + fmt(r.gap_terms->rhs));
    const double rhs_rel = r.gap_terms->rhs / std::abs(e.lambda1) * 1.05;
    add(r, "bound_below_formula", rhs_rel > 0 && BigFloat(std::log10(rhs_rel), prec) >= l10_bound,
        "rhs/|lambda1| = " + fmt(r.gap_terms->rhs / std::abs(e.lambda1)));
  }

  r.certified = r.relative_gap > 0;
  for (const auto& ch : r.checks) r.certified = r.certified && ch.status == CheckStatus::pass;
  if (fields) *fields = std::move(e);
  return r;
}

}  // namespace gapcert
