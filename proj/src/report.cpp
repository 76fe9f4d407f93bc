#include "gapcert/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace gapcert {

namespace {

Json entry(const std::string& name, const LogValue& v) {
  Json j;
  j["name"] = name;
  j["sign"] = v.sign() > 0 ? "+" : v.sign() < 0 ? "-" : "0";
  j["log10"] = v.is_zero() ? Json(nullptr) : Json(v.log10_string(20));
  j["rendered"] = v.is_zero() ? std::string("0") : render_log10(v.log10_abs(), name);
  return j;
}

Json entries(const std::vector<std::pair<std::string, const LogValue*>>& es) {
  Json arr = Json::array();
  for (const auto& [name, v] : es) arr.push_back(entry(name, *v));
  return arr;
}

Json to_json(const LocalNormResult& r) {
  Json j;
  j["value"] = number(r.value);
  j["raw"] = number(r.raw);
  j["padding"] = number(r.padding);
  j["argmax"] = {number(r.argmax[0]), number(r.argmax[1]), number(r.argmax[2])};
  j["refinements"] = r.refinements;
  j["converged"] = r.converged;
  return j;
}

Json point(const Point& p, int dim) {
  Json j = Json::array();
  for (int i = 0; i < dim; ++i) j.push_back(number(p[i]));
  return j;
}

}  // namespace

Json number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  // Round-trip through %.17g so every writer prints the same digits.
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::strtod(buf, nullptr);
}

Json to_json(const CertificateInputs& in) {
  Json j;
  j["n"] = in.n;
  j["q"] = number(in.q);
  j["mu"] = number(in.mu);
  j["nu"] = number(in.nu);
  j["d"] = number(in.d);
  j["L"] = number(in.L);
  j["r0"] = number(in.r0);
  j["sup_local_V"] = number(in.sup_local_V);
  j["sup_local_Vminus"] = number(in.sup_local_Vminus);
  j["norm_Vminus_Omega0"] = number(in.norm_Vminus_Omega0);
  j["vol_Omega0_d4"] = number(in.vol_Omega0_d4);
  j["dirichlet_everywhere"] = in.dirichlet_everywhere;
  j["vhat_exponent"] = in.variant == VhatVariant::literal ? "literal" : "dimensional";
  return j;
}

Json to_json(const ConstantChain& c) {
  Json j;
  j["constants"] = entries(c.entries());
  j["c1_branch"] = std::string(to_string(c.c1_branch));
  j["log10_bound"] = c.bound.log10_string(20);
  j["log10_bound_rendered"] = render_log10(c.bound.log10_abs(), "bound");
  const BigFloat l10 = c.bound.log10_abs();
  j["log10_abs_log10_bound"] = l10.is_zero() ? Json(nullptr) : Json(log10(l10.abs()).to_decimal(20));
  return j;
}

Json to_json(const Section5Constants& s) {
  Json j;
  j["constants"] = entries(s.entries());
  return j;
}

Json to_json(const AssumptionReport& a) {
  Json arr = Json::array();
  for (const auto& c : a.checks) {
    Json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["measured"] = number(c.measured);
    e["detail"] = c.detail;
    arr.push_back(e);
  }
  Json j;
  j["all_passed"] = a.all_passed();
  j["checks"] = arr;
  return j;
}

Json to_json(const Measurements& m) {
  Json j;
  j["inputs"] = to_json(m.inputs);
  j["volume"] = {{"value", number(m.volume.value)}, {"error", number(m.volume.error)}};
  j["local_V"] = to_json(m.local_V);
  j["local_Vminus"] = to_json(m.local_Vminus);
  j["clearance_r0"] = number(m.clearance_r0);
  j["mu_bumped"] = m.mu_bumped;
  j["assumptions"] = to_json(m.assumptions);
  return j;
}

Json to_json(const ValidationRecord& r) {
  const int dim = r.measurements.inputs.n;
  Json j;
  j["certified"] = r.certified;
  j["in_hypotheses"] = r.in_hypotheses;
  j["lambda0"] = number(r.lambda0);
  j["lambda1"] = number(r.lambda1);
  j["relative_gap"] = number(r.relative_gap);
  j["log10_relative_gap"] = r.relative_gap > 0 ? number(std::log10(r.relative_gap)) : Json(nullptr);
  j["log10_bound"] = r.chain.bound.log10_string(20);
  j["log10_bound_rendered"] = render_log10(r.chain.bound.log10_abs(), "bound");
  j["solver"] = {{"residual0", number(r.residual0)},
                 {"residual1", number(r.residual1)},
                 {"iterations", r.iterations},
                 {"degenerate", r.degenerate}};
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"status", std::string(to_string(c.status))}, {"detail", c.detail}});
  j["checks"] = checks;
  j["measurements"] = to_json(r.measurements);
  j["chain"] = to_json(r.chain);
  j["section5"] = to_json(r.section5);
  j["cross_path_max"] = number(r.cross_path_max);
  j["tube"] = {{"from", point(r.tube.a, dim)}, {"to", point(r.tube.b, dim)}, {"radius", number(r.tube.radius)}};
  if (r.ground) {
    const auto& g = *r.ground;
    j["ground_state"] = {{"sign_pure", g.sign_pure},
                         {"min_relative", number(g.min_relative)},
                         {"harnack_ratio", number(g.harnack_ratio)},
                         {"harnack_points", g.harnack_points},
                         {"log10_harnack_ratio", number(g.log10_harnack_ratio)},
                         {"log10_C2", g.log10_C2},
                         {"harnack_within_C2", g.harnack_within_C2}};
  }
  if (r.second) {
    const auto& s = *r.second;
    j["second_eigenfunction"] = {{"min_in_omega0", number(s.min_in_omega0)},
                                 {"node_check", s.node_check},
                                 {"global_max_abs", number(s.global_max_abs)},
                                 {"max_check", s.max_check},
                                 {"l2_norm_squared", number(s.l2_norm_squared)},
                                 {"log10_l2_limit", s.log10_l2_limit},
                                 {"l2_check", s.l2_check}};
  }
  if (r.gap_terms) {
    const auto& t = *r.gap_terms;
    j["gap_formula"] = {{"inf_psi0", number(t.inf_psi0)},
                        {"tube_volume", number(t.tube_volume)},
                        {"psi1_l2_squared", number(t.psi1_l2_squared)},
                        {"grad_l1", number(t.grad_l1)},
                        {"tube_points", t.tube_points},
                        {"rhs", number(t.rhs)}};
  }
  return j;
}

std::string chain_table(const ConstantChain& c) {
  std::ostringstream os;
  for (const auto& [name, v] : c.entries()) {
    os << name << "  ";
    if (v->is_zero()) os << "= 0\n";
    else os << (v->sign() < 0 ? "(negative) " : "") << render_log10(v->log10_abs(), name) << "\n";
  }
  os << "c1 branch: " << to_string(c.c1_branch) << "\n";
  return os.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace gapcert
