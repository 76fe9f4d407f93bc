#include "gapcert/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gapcert/errors.hpp"

namespace gapcert {

using nlohmann::json;

std::string_view to_string(SweepRegime r) {
  switch (r) {
    case SweepRegime::separation: return "separation";
    case SweepRegime::coupling: return "coupling";
    case SweepRegime::semiclassical: return "semiclassical";
    case SweepRegime::contrast: return "contrast";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::config_error, path + ": " + what);
}

/// Object reader that remembers which keys were consumed, so leftovers can be
/// rejected as unknown.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) fail(path_, "missing required key '" + key + "'");
    seen_.insert(key);
    return j_.at(key);
  }

  const json* maybe(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    seen_.insert(key);
    return &j_.at(key);
  }

  std::string sub(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(path_, "unknown key '" + it.key() + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = num(j, path);
  if (!(v > 0)) fail(path, "expected a positive number");
  return v;
}

std::string str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

Point point(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(path, "expected an array of " + std::to_string(dim) + " numbers");
  Point p{};
  for (int i = 0; i < dim; ++i) p[i] = num(j[i], path + "[" + std::to_string(i) + "]");
  return p;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(num(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Primitive primitive_from(Obj& o, int dim, const std::string& path) {
  const std::string shape = str(o.at("shape"), o.sub("shape"));
  if (shape == "ball") {
    const Point c = point(o.at("center"), dim, o.sub("center"));
    const double r = positive(o.at("radius"), o.sub("radius"));
    return Primitive::ball(c, r);
  }
  if (shape == "box") {
    const Point lo = point(o.at("lo"), dim, o.sub("lo"));
    const Point hi = point(o.at("hi"), dim, o.sub("hi"));
    for (int i = 0; i < dim; ++i)
      if (!(hi[i] > lo[i])) fail(path, "box needs hi > lo on every axis");
    return Primitive::box(lo, hi);
  }
  fail(o.sub("shape"), "expected 'ball' or 'box'");
}

Primitive primitive(const json& j, int dim, const std::string& path) {
  Obj o(j, path);
  Primitive p = primitive_from(o, dim, path);
  o.finish();
  return p;
}

FaceCondition face(const json& j, const std::string& path) {
  const std::string s = str(j, path);
  if (s == "dirichlet") return FaceCondition::dirichlet;
  if (s == "neumann") return FaceCondition::neumann;
  fail(path, "expected 'dirichlet' or 'neumann'");
}

DomainSpec domain(Obj& p, int dim) {
  DomainSpec d;
  d.dim = dim;
  {
    Obj box(p.at("box"), p.sub("box"));
    d.lo = point(box.at("lo"), dim, box.sub("lo"));
    d.hi = point(box.at("hi"), dim, box.sub("hi"));
    box.finish();
  }
  const json& b = p.at("boundary");
  if (b.is_string()) {
    const FaceCondition c = face(b, p.sub("boundary"));
    d.faces.fill(c);
  } else {
    static const char* names[6] = {"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"};
    Obj fo(b, p.sub("boundary"));
    d.faces.fill(FaceCondition::dirichlet);
    for (int f = 0; f < 2 * dim; ++f) d.faces[f] = face(fo.at(names[f]), fo.sub(names[f]));
    fo.finish();
  }
  try {
    d.validate();
  } catch (const Error& e) {
    fail(p.sub("box"), e.what());
  }
  return d;
}

CoefficientField coefficients(const json& j, int dim, const std::string& path) {
  Obj o(j, path);
  const std::string type = str(o.at("type"), o.sub("type"));
  CoefficientField A;
  if (type == "constant") {
    const json& m = o.at("matrix");
    if (!m.is_array() || static_cast<int>(m.size()) != dim) fail(o.sub("matrix"), "expected a dim x dim array");
    A.dim = dim;
    for (int i = 0; i < dim; ++i) {
      const auto row = numbers(m[i], o.sub("matrix") + "[" + std::to_string(i) + "]");
      if (static_cast<int>(row.size()) != dim) fail(o.sub("matrix"), "expected a dim x dim array");
      for (int k = 0; k < dim; ++k) A.matrix[i][k] = row[k];
    }
  } else if (type == "diagonal") {
    const auto v = numbers(o.at("values"), o.sub("values"));
    if (static_cast<int>(v.size()) != dim) fail(o.sub("values"), "expected dim entries");
    A = CoefficientField::diagonal(dim, v);
  } else if (type == "checkerboard") {
    A.kind = CoefficientField::Kind::checkerboard;
    A.dim = dim;
    A.period = positive(o.at("period"), o.sub("period"));
    if (const json* org = o.maybe("origin")) A.origin = point(*org, dim, o.sub("origin"));
    const auto v = numbers(o.at("values"), o.sub("values"));
    if (v.size() != 2) fail(o.sub("values"), "expected two values");
    A.values = {v[0], v[1]};
  } else {
    fail(o.sub("type"), "expected 'constant', 'diagonal' or 'checkerboard'");
  }
  double scale = 1.0;
  if (const json* s = o.maybe("scale")) scale = positive(*s, o.sub("scale"));
  o.finish();
  for (auto& row : A.matrix)
    for (double& x : row) x *= scale;
  for (double& x : A.values) x *= scale;
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k)
      if (A.matrix[i][k] != A.matrix[k][i]) fail(path, "coefficient matrix must be symmetric");
  if (!(A.lower_ellipticity() > 0)) fail(path, "coefficient field must be uniformly elliptic");
  return A;
}

PotentialField potential(const json& j, int dim, const std::string& path) {
  Obj o(j, path);
  PotentialField V;
  V.dim = dim;
  if (const json* b = o.maybe("background")) V.background = num(*b, o.sub("background"));
  if (const json* w = o.maybe("wells")) {
    if (!w->is_array()) fail(o.sub("wells"), "expected an array");
    for (std::size_t i = 0; i < w->size(); ++i) {
      const std::string wp = o.sub("wells") + "[" + std::to_string(i) + "]";
      Obj wo((*w)[i], wp);
      PotentialField::Well well;
      well.value = num(wo.at("value"), wo.sub("value"));
      well.shape = primitive_from(wo, dim, wp);
      wo.finish();
      V.wells.push_back(well);
    }
  }
  o.finish();
  return V;
}

Region region(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of primitives");
  Region r;
  r.dim = dim;
  for (std::size_t i = 0; i < j.size(); ++i)
    r.primitives.push_back(primitive(j[i], dim, path + "[" + std::to_string(i) + "]"));
  return r;
}

OmegaHat omega_hat(const json& j, int dim, const std::string& path) {
  Obj o(j, path);
  OmegaHat oh;
  const json* c = o.maybe("hull_clearance");
  const json* p = o.maybe("primitive");
  if ((c != nullptr) == (p != nullptr)) fail(path, "give exactly one of 'hull_clearance' or 'primitive'");
  if (c) {
    oh.kind = OmegaHat::Kind::hull_inflation;
    oh.clearance = positive(*c, o.sub("hull_clearance"));
  } else {
    oh.kind = OmegaHat::Kind::primitive;
    oh.shape = primitive(*p, dim, o.sub("primitive"));
  }
  o.finish();
  return oh;
}

ProblemConfig problem(const json& j) {
  Obj o(j, "problem");
  const json& dj = o.at("dimension");
  if (!dj.is_number_integer() || (dj.get<int>() != 2 && dj.get<int>() != 3))
    fail(o.sub("dimension"), "expected 2 or 3");
  const int dim = dj.get<int>();
  ProblemConfig p;
  p.domain = domain(o, dim);
  p.A = coefficients(o.at("coefficients"), dim, o.sub("coefficients"));
  p.V = potential(o.at("potential"), dim, o.sub("potential"));
  p.omega0 = region(o.at("omega0"), dim, o.sub("omega0"));
  p.omega_hat = omega_hat(o.at("omega_hat"), dim, o.sub("omega_hat"));
  if (const json* t = o.maybe("tube")) {
    Obj to(*t, o.sub("tube"));
    TubeSpec tube;
    tube.a = point(to.at("from"), dim, to.sub("from"));
    tube.b = point(to.at("to"), dim, to.sub("to"));
    if (const json* r = to.maybe("radius")) tube.radius = positive(*r, to.sub("radius"));
    to.finish();
    p.tube = tube;
  }
  o.finish();
  return p;
}

VhatVariant variant(const json& j, const std::string& path) {
  const std::string s = str(j, path);
  if (s == "literal") return VhatVariant::literal;
  if (s == "dimensional") return VhatVariant::dimensional;
  fail(path, "expected 'literal' or 'dimensional'");
}

unsigned precision_bits(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long>() < 64 || j.get<long>() > 4096)
    fail(path, "expected an integer number of bits in [64, 4096]");
  return static_cast<unsigned>(j.get<long>());
}

CertificateConfig certificate(const json& j) {
  Obj o(j, "certificate");
  CertificateConfig c;
  if (const json* q = o.maybe("q")) c.q = num(*q, o.sub("q"));
  if (const json* v = o.maybe("vhat_exponent")) c.variant = variant(*v, o.sub("vhat_exponent"));
  if (const json* p = o.maybe("precision")) c.precision = precision_bits(*p, o.sub("precision"));
  if (const json* m = o.maybe("mu")) c.mu = positive(*m, o.sub("mu"));
  if (const json* n = o.maybe("nu")) c.nu = positive(*n, o.sub("nu"));
  if (const json* s = o.maybe("sampling")) {
    Obj so(*s, o.sub("sampling"));
    if (const json* x = so.maybe("center_step_fraction")) c.center_step_fraction = positive(*x, so.sub("center_step_fraction"));
    if (const json* x = so.maybe("volume_step_fraction")) c.volume_step_fraction = positive(*x, so.sub("volume_step_fraction"));
    if (const json* x = so.maybe("norm_step_fraction")) c.norm_step_fraction = positive(*x, so.sub("norm_step_fraction"));
    if (const json* x = so.maybe("max_refinements")) {
      if (!x->is_number_integer() || x->get<int>() < 0 || x->get<int>() > 8)
        fail(so.sub("max_refinements"), "expected an integer in [0, 8]");
      c.max_refinements = x->get<int>();
    }
    so.finish();
  }
  o.finish();
  return c;
}

CertificateInputs direct_inputs(const json& j) {
  Obj o(j, "certificate_inputs");
  CertificateInputs in;
  const json& nj = o.at("n");
  if (!nj.is_number_integer()) fail(o.sub("n"), "expected an integer");
  in.n = nj.get<int>();
  in.q = num(o.at("q"), o.sub("q"));
  in.mu = num(o.at("mu"), o.sub("mu"));
  in.nu = num(o.at("nu"), o.sub("nu"));
  in.d = num(o.at("d"), o.sub("d"));
  in.L = num(o.at("L"), o.sub("L"));
  in.r0 = num(o.at("r0"), o.sub("r0"));
  in.sup_local_V = num(o.at("sup_local_V"), o.sub("sup_local_V"));
  in.sup_local_Vminus = num(o.at("sup_local_Vminus"), o.sub("sup_local_Vminus"));
  in.norm_Vminus_Omega0 = num(o.at("norm_Vminus_Omega0"), o.sub("norm_Vminus_Omega0"));
  in.vol_Omega0_d4 = num(o.at("vol_Omega0_d4"), o.sub("vol_Omega0_d4"));
  if (const json* b = o.maybe("dirichlet_everywhere")) in.dirichlet_everywhere = boolean(*b, o.sub("dirichlet_everywhere"));
  if (const json* v = o.maybe("vhat_exponent")) in.variant = variant(*v, o.sub("vhat_exponent"));
  o.finish();
  return in;
}

SolverConfig solver(const json& j) {
  Obj o(j, "solver");
  SolverConfig s;
  if (const json* h = o.maybe("h")) s.h = positive(*h, o.sub("h"));
  if (const json* t = o.maybe("tol")) s.tol = positive(*t, o.sub("tol"));
  if (const json* seed = o.maybe("seed")) {
    if (!seed->is_number_unsigned()) fail(o.sub("seed"), "expected a nonnegative integer");
    s.seed = seed->get<std::uint64_t>();
  }
  if (const json* a = o.maybe("averaging")) {
    const std::string v = str(*a, o.sub("averaging"));
    if (v == "arithmetic") s.averaging = FaceAveraging::arithmetic;
    else if (v == "harmonic") s.averaging = FaceAveraging::harmonic;
    else fail(o.sub("averaging"), "expected 'arithmetic' or 'harmonic'");
  }
  if (const json* m = o.maybe("max_iterations")) {
    if (!m->is_number_integer() || m->get<int>() < 1) fail(o.sub("max_iterations"), "expected a positive integer");
    s.max_iterations = m->get<int>();
  }
  o.finish();
  return s;
}

SweepSpec sweep(const json& j) {
  Obj o(j, "sweep");
  SweepSpec s;
  const std::string r = str(o.at("regime"), o.sub("regime"));
  if (r == "separation") s.regime = SweepRegime::separation;
  else if (r == "coupling") s.regime = SweepRegime::coupling;
  else if (r == "semiclassical") s.regime = SweepRegime::semiclassical;
  else if (r == "contrast") s.regime = SweepRegime::contrast;
  else fail(o.sub("regime"), "expected separation, coupling, semiclassical or contrast");
  s.values = numbers(o.at("values"), o.sub("values"));
  o.finish();
  if (s.values.size() < 2) fail("sweep.values", "expected at least two parameter values");
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < s.values.size(); ++i) {
    inc = inc && s.values[i] > s.values[i - 1];
    dec = dec && s.values[i] < s.values[i - 1];
  }
  if (!inc && !dec) fail("sweep.values", "parameter grid must be strictly monotone");
  return s;
}

OutputConfig output(const json& j) {
  Obj o(j, "output");
  OutputConfig out;
  if (const json* d = o.maybe("directory")) out.directory = str(*d, o.sub("directory"));
  if (const json* f = o.maybe("format")) {
    const std::string v = str(*f, o.sub("format"));
    if (v == "csv") out.format = OutputFormat::csv;
    else if (v == "json") out.format = OutputFormat::json;
    else if (v == "table") out.format = OutputFormat::table;
    else fail(o.sub("format"), "expected csv, json or table");
  }
  o.finish();
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config_error, std::string("malformed JSON: ") + e.what());
  }
  Obj o(doc, "$");
  RunConfig cfg;
  if (const json* p = o.maybe("problem")) cfg.problem = problem(*p);
  if (const json* c = o.maybe("certificate_inputs")) cfg.certificate_inputs = direct_inputs(*c);
  if (const json* c = o.maybe("certificate")) cfg.certificate = certificate(*c);
  if (const json* s = o.maybe("solver")) cfg.solver = solver(*s);
  if (const json* s = o.maybe("sweep")) cfg.sweep = sweep(*s);
  if (const json* s = o.maybe("output")) cfg.output = output(*s);
  o.finish();
  if (!cfg.problem && !cfg.certificate_inputs)
    fail("$", "need 'problem' or 'certificate_inputs'");
  if (cfg.problem && cfg.certificate_inputs)
    fail("$", "'problem' and 'certificate_inputs' are mutually exclusive");
  if (cfg.sweep && !cfg.problem) fail("$.sweep", "a sweep needs a 'problem'");
  if (cfg.problem && !(cfg.certificate.q > cfg.problem->domain.dim))
    fail("certificate.q", "q must exceed the dimension");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config_error, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace gapcert
