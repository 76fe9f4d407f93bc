#include "gapcert/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "gapcert/errors.hpp"
#include "gapcert/report.hpp"

namespace gapcert {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<const SweepPoint*> usable(const SweepResult& r) {
  std::vector<const SweepPoint*> out;
  for (const auto& p : r.points)
    if (p.record) out.push_back(&p);
  return out;
}

void require_points(std::size_t have, const char* what) {
  if (have < 4)
    throw Error(ErrorKind::insufficient_data,
                std::string(what) + ": need at least 4 usable points, have " + std::to_string(have));
}

}  // namespace

LeastSquaresFit least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
  const long m = static_cast<long>(y.size());
  const long k = static_cast<long>(columns.size());
  Eigen::MatrixXd X(m, k);
  Eigen::VectorXd Y(m);
  for (long i = 0; i < m; ++i) {
    Y(i) = y[i];
    for (long c = 0; c < k; ++c) X(i, c) = columns[c][i];
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(Y);
  LeastSquaresFit f;
  f.coefficients.assign(beta.data(), beta.data() + k);
  const double mean = Y.mean();
  const double ss_tot = (Y.array() - mean).square().sum();
  const double ss_res = (Y - X * beta).squaredNorm();
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
  return f;
}

ProblemConfig sweep_problem(const ProblemConfig& base, SweepRegime regime, double value) {
  ProblemConfig p = base;
  switch (regime) {
    case SweepRegime::separation: {
      if (p.omega0.primitives.size() < 2 || p.V.wells.size() < 2)
        throw Error(ErrorKind::config_error, "separation sweep needs two Omega0 primitives and two wells");
      for (int w = 0; w < 2; ++w) {
        Point c{};
        c[0] = (w == 0 ? -0.5 : 0.5) * value;
        p.omega0.primitives[w].center = c;
        p.V.wells[w].shape.center = c;
      }
      if (p.tube) p.tube.reset();
      break;
    }
    case SweepRegime::coupling:
      if (p.V.wells.empty()) throw Error(ErrorKind::config_error, "coupling sweep needs at least one well");
      for (auto& w : p.V.wells) w.value = value;
      break;
    case SweepRegime::semiclassical: {
      if (p.A.kind != CoefficientField::Kind::constant)
        throw Error(ErrorKind::config_error, "semiclassical sweep needs a constant coefficient matrix");
      const double s = value / base.A.lower_ellipticity();
      for (auto& row : p.A.matrix)
        for (double& x : row) x *= s;
      break;
    }
    case SweepRegime::contrast:
      if (p.A.kind != CoefficientField::Kind::checkerboard)
        throw Error(ErrorKind::config_error, "contrast sweep needs a checkerboard coefficient field");
      p.A.values = {value, std::max(base.A.values[0], base.A.values[1])};
      break;
  }
  return p;
}

ShapeCheck separation_shape(const CertificateInputs& base, const std::vector<double>& Ls, unsigned precision) {
  ShapeCheck sc;
  std::vector<LogValue> S;
  const double n = base.n;
  for (double L : Ls) {
    CertificateInputs in = base;
    in.L = L;
    const ConstantChain ch = constant_chain(in, precision);
    const LogValue lnb = LogValue::from_big(ch.bound.ln_abs());
    const LogValue s = lnb + ch.c11 * LogValue::from_double(L, precision) +
                       LogValue::from_double((n + 1) * std::log(L), precision);
    sc.L.push_back(L);
    sc.value.push_back(s.is_zero() ? "0" : std::string(s.sign() < 0 ? "-" : "+") + "10^(" + s.log10_string(20) + ")");
    sc.first_branch.push_back(ch.c1_branch == C1Branch::first);
    if (ch.c1_branch == C1Branch::first) S.push_back(s);
  }
  if (S.size() < 2) {
    sc.relative_variation = std::numeric_limits<double>::infinity();
    return sc;
  }
  LogValue lo = S[0], hi = S[0], scale = S[0].abs();
  for (const auto& s : S) {
    lo = min(lo, s);
    hi = max(hi, s);
    scale = max(scale, s.abs());
  }
  sc.relative_variation = ((hi - lo) / scale).to_double();
  sc.passed = sc.relative_variation <= 0.01;
  return sc;
}

LeastSquaresFit semiclassical_fit(const std::vector<double>& nu, const std::vector<LogValue>& bounds) {
  std::vector<BigFloat> y;
  for (const auto& b : bounds) y.push_back(b.ln_abs());
  const BigFloat span = y.back() - y.front();
  std::vector<double> z, one, inv, lg;
  for (std::size_t i = 0; i < y.size(); ++i) {
    z.push_back(span.is_zero() ? 0.0 : ((y[i] - y.front()) / span).to_double());
    one.push_back(1.0);
    inv.push_back(1.0 / std::sqrt(nu[i]));
    lg.push_back(std::log(nu[i]) / std::sqrt(nu[i]));
  }
  return least_squares({one, inv, lg}, z);
}

bool SweepResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SweepCheck& c) { return c.passed; });
}

SweepResult run_sweep(const ProblemConfig& base, const CertificateConfig& c, const SolverConfig& s,
                      const SweepSpec& spec) {
  SweepResult r;
  r.regime = spec.regime;
  std::vector<double> values = spec.values;
  std::sort(values.begin(), values.end());

  SolverConfig solver = s;
  if (spec.regime == SweepRegime::contrast) solver.averaging = FaceAveraging::harmonic;
  CertificateConfig cert = c;
  if (spec.regime == SweepRegime::semiclassical || spec.regime == SweepRegime::contrast) {
    cert.mu.reset();
    cert.nu.reset();
  }

  for (double v : values) {
    SweepPoint pt;
    pt.param = v;
    try {
      pt.record = certify_and_solve(sweep_problem(base, spec.regime, v), cert, solver);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::config_error) throw;
      pt.error_kind = std::string(to_string(e.kind()));
      pt.error_message = e.what();
    }
    r.points.push_back(std::move(pt));
  }

  const auto pts = usable(r);
  bool certified_ok = true;
  long certified = 0;
  for (const auto* p : pts) {
    if (!p->record->certified) continue;
    ++certified;
    const Check* mi = p->record->find("main_inequality");
    const Check* gf = p->record->find("gap_formula_chain");
    certified_ok = certified_ok && mi && mi->status == CheckStatus::pass && gf && gf->status == CheckStatus::pass &&
                   p->record->relative_gap > 0;
  }
  r.checks.push_back({"certified_points_satisfy_inequalities", certified > 0 && certified_ok,
                      std::to_string(certified) + " certified point(s)"});

  switch (spec.regime) {
    case SweepRegime::separation: {
      std::vector<double> xs, ys, one;
      for (const auto* p : pts) {
        const double gap = p->record->lambda1 - p->record->lambda0;
        if (gap > 0) {
          xs.push_back(p->param);
          ys.push_back(std::log(gap));
          one.push_back(1.0);
        }
      }
      require_points(xs.size(), "separation sweep");
      r.fit = least_squares({one, xs}, ys);
      const double b = -r.fit->coefficients[1];
      r.checks.push_back({"gap_decay_rate_positive", b > 0, "fitted decay rate " + fmt(b)});
      r.checks.push_back({"gap_log_linear", r.fit->r2 >= 0.98, "R^2 = " + fmt(r.fit->r2)});

      // A constant gap must not pass as tunneling decay.
      std::vector<double> flat(xs.size(), ys.front());
      r.control_fit = least_squares({one, xs}, flat);
      const bool control_passes = -r.control_fit->coefficients[1] > 0 && r.control_fit->r2 >= 0.98;
      r.checks.push_back({"constant_gap_control_rejected", !control_passes,
                          "synthetic constant gap: R^2 = " + fmt(r.control_fit->r2)});

      std::vector<double> Ls;
      for (const auto* p : pts) Ls.push_back(p->record->measurements.inputs.L);
      std::sort(Ls.begin(), Ls.end());
      r.shape = separation_shape(pts.front()->record->measurements.inputs, Ls, c.precision);
      r.checks.push_back({"certificate_shape_constant", r.shape->passed,
                          "relative variation " + fmt(r.shape->relative_variation)});
      break;
    }
    case SweepRegime::coupling: {
      // Points ordered by decreasing depth |V0|.
      std::vector<const SweepPoint*> by_depth = pts;
      std::sort(by_depth.begin(), by_depth.end(),
                [](const SweepPoint* a, const SweepPoint* b) { return std::abs(a->param) > std::abs(b->param); });
      bool mono = true, positive = true;
      double prev = std::numeric_limits<double>::infinity();
      long in_h = 0;
      std::string lost;
      for (const auto* p : by_depth) {
        if (!p->record->in_hypotheses) {
          if (lost.empty()) lost = fmt(p->param);
          continue;
        }
        ++in_h;
        const double m = std::abs(p->record->lambda1);
        mono = mono && m < prev;
        prev = m;
        positive = positive && p->record->chain.bound.sign() > 0;
      }
      r.checks.push_back({"lambda1_magnitude_decreasing", in_h >= 2 && mono,
                          std::to_string(in_h) + " point(s) inside the hypotheses"});
      r.checks.push_back({"bound_positive", in_h > 0 && positive, "bound > 0 at every point inside the hypotheses"});
      r.checks.push_back({"weak_coupling_threshold_reached", !lost.empty(),
                          lost.empty() ? "lambda1 < 0 at every point" : "lambda1 >= 0 first at V0 = " + lost});
      break;
    }
    case SweepRegime::semiclassical: {
      std::vector<double> nus;
      std::vector<LogValue> bounds;
      bool decreasing = true, scale_ok = true;
      double prev_gap = -1;
      for (const auto* p : pts) {  // ascending nu
        nus.push_back(p->param);
        bounds.push_back(p->record->chain.bound);
        if (prev_gap >= 0) decreasing = decreasing && p->record->relative_gap > prev_gap;
        prev_gap = p->record->relative_gap;
        CertificateInputs k = p->record->measurements.inputs;
        for (double* x : {&k.mu, &k.nu, &k.sup_local_V, &k.sup_local_Vminus, &k.norm_Vminus_Omega0}) *x *= 10;
        const LogValue kb = gap_bound(k, c.precision);
        scale_ok = scale_ok && relative_log_difference(kb, p->record->chain.bound) <= 1e-9;
      }
      require_points(nus.size(), "semiclassical sweep");
      r.checks.push_back({"relative_gap_decreases_with_nu", decreasing, "relative gap increasing in nu"});
      r.fit = semiclassical_fit(nus, bounds);
      r.checks.push_back({"certificate_template_fit", r.fit->r2 >= 0.99, "R^2 = " + fmt(r.fit->r2)});
      r.checks.push_back({"scale_invariance", scale_ok, "mu, nu and V-norms times 10"});
      break;
    }
    case SweepRegime::contrast: {
      const SweepPoint* extreme = nullptr;
      for (const auto* p : pts)
        if (!extreme || p->param < extreme->param) extreme = p;
      const bool ok = extreme && extreme->record->chain.bound.sign() > 0;
      r.checks.push_back({"extreme_bound_positive_finite", ok,
                          ok ? render_log10(extreme->record->chain.bound.log10_abs(), "bound") : "no usable point"});
      break;
    }
  }
  return r;
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "param,lambda0,lambda1,relative_gap,log10_bound,certified,check_flags\n";
  for (const auto& p : r.points) {
    os << fmt(p.param) << ',';
    if (!p.record) {
      os << ",,,,false,error=" << p.error_kind << '\n';
      continue;
    }
    const auto& rec = *p.record;
    os << fmt(rec.lambda0) << ',' << fmt(rec.lambda1) << ',' << fmt(rec.relative_gap) << ','
       << rec.chain.bound.log10_string(40) << ',' << (rec.certified ? "true" : "false") << ','
       << rec.check_flags() << '\n';
  }
  return os.str();
}

std::string sweep_summary_json(const SweepResult& r) {
  Json j;
  j["regime"] = std::string(to_string(r.regime));
  j["all_passed"] = r.all_passed();
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  auto fit_json = [](const LeastSquaresFit& f) {
    Json coef = Json::array();
    for (double x : f.coefficients) coef.push_back(number(x));
    return Json{{"coefficients", coef}, {"r2", number(f.r2)}};
  };
  if (r.fit) j["fit"] = fit_json(*r.fit);
  if (r.control_fit) j["control_fit"] = fit_json(*r.control_fit);
  if (r.shape) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < r.shape->L.size(); ++i)
      pts.push_back({{"L", number(r.shape->L[i])},
                     {"shape_value", r.shape->value[i]},
                     {"first_branch", static_cast<bool>(r.shape->first_branch[i])}});
    j["shape"] = {{"points", pts},
                  {"relative_variation", number(r.shape->relative_variation)},
                  {"passed", r.shape->passed}};
  }
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json e;
    e["param"] = number(p.param);
    if (p.record) {
      e["record"] = to_json(*p.record);
    } else {
      e["error"] = {{"kind", p.error_kind}, {"message", p.error_message}};
    }
    pts.push_back(e);
  }
  j["points"] = pts;
  return dump(j);
}

}  // namespace gapcert
