#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gapcert/config.hpp"
#include "gapcert/errors.hpp"
#include "gapcert/report.hpp"
#include "gapcert/sweeps.hpp"
#include "gapcert/validate.hpp"

using namespace gapcert;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<unsigned> precision;
  std::optional<std::uint64_t> seed;
  std::string format;
};

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::config_error, "cannot write " + path);
  f << text;
}

RunConfig load(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (o.precision) {
    if (*o.precision < 64 || *o.precision > 4096) throw Error(ErrorKind::config_error, "--precision must be in [64, 4096]");
    cfg.certificate.precision = *o.precision;
  }
  if (o.seed) cfg.solver.seed = *o.seed;
  if (!o.out.empty()) cfg.output.directory = o.out;
  if (o.format == "csv") cfg.output.format = OutputFormat::csv;
  else if (o.format == "json") cfg.output.format = OutputFormat::json;
  else if (o.format == "table") cfg.output.format = OutputFormat::table;
  return cfg;
}

const ProblemConfig& need_problem(const RunConfig& cfg, const char* cmd) {
  if (!cfg.problem) throw Error(ErrorKind::config_error, std::string(cmd) + " needs a 'problem' section");
  return *cfg.problem;
}

int cmd_bound(const RunConfig& cfg) {
  Json j;
  CertificateInputs in;
  if (cfg.certificate_inputs) {
    in = *cfg.certificate_inputs;
    in.validate();
  } else {
    const Measurements m = measure(*cfg.problem, cfg.certificate);
    in = m.inputs;
    j["measurements"] = to_json(m);
  }
  const unsigned prec = cfg.certificate.precision;
  const ConstantChain chain = constant_chain(in, prec);
  const Section5Constants s5 = section5_chain(in, prec);
  j["precision_bits"] = prec;
  j["inputs"] = to_json(in);
  j["log10_bound"] = chain.bound.log10_string(20);
  j["log10_bound_rendered"] = render_log10(chain.bound.log10_abs(), "bound");
  j["chain"] = to_json(chain);
  j["section5"] = to_json(s5);
  const std::string text = dump(j);
  if (!cfg.output.directory.empty()) write_file(cfg.output.directory, "bound.json", text);
  if (cfg.output.format == OutputFormat::table) std::cout << chain_table(chain);
  else std::cout << text;
  return 0;
}

int cmd_solve(const RunConfig& cfg) {
  const ProblemConfig& p = need_problem(cfg, "solve");
  bool bumped = false;
  const auto [nu, mu] = ellipticity_bounds(p, cfg.certificate, &bumped);
  EigenResult e = solve_problem(p, cfg.solver, nu, mu);
  normalize_second(e, p.omega0);
  Json j;
  j["h"] = number(cfg.solver.h);
  j["lambda0"] = number(e.lambda0);
  j["lambda1"] = number(e.lambda1);
  j["residual0"] = number(e.residual0);
  j["residual1"] = number(e.residual1);
  j["iterations"] = e.iterations;
  j["degenerate"] = e.degenerate;
  j["psi1_normalization"] = "max over closed Omega0 equals 1";
  const std::string text = dump(j);
  const std::string& dir = cfg.output.directory;
  if (!dir.empty()) {
    write_file(dir, "solve.json", text);
    std::filesystem::create_directories(dir);
    for (const auto& [name, f] : {std::pair{"psi0", &e.psi0}, std::pair{"psi1", &e.psi1}}) {
      write_grid_binary((std::filesystem::path(dir) / (std::string(name) + ".bin")).string(), e.grid, *f);
      write_grid_csv((std::filesystem::path(dir) / (std::string(name) + ".csv")).string(), e.grid, *f);
    }
  }
  std::cout << text;
  return 0;
}

int cmd_validate(const RunConfig& cfg) {
  const ProblemConfig& p = need_problem(cfg, "validate");
  const ValidationRecord r = certify_and_solve(p, cfg.certificate, cfg.solver);
  const std::string text = dump(to_json(r));
  if (!cfg.output.directory.empty()) write_file(cfg.output.directory, "validate.json", text);
  if (cfg.output.format == OutputFormat::table) {
    std::printf("lambda0 = %.17g\nlambda1 = %.17g\nrelative gap = %.17g\n%s\ncertified: %s\n", r.lambda0, r.lambda1,
                r.relative_gap, render_log10(r.chain.bound.log10_abs(), "bound").c_str(),
                r.certified ? "yes" : "no");
    for (const auto& c : r.checks) std::printf("  %-36s %s\n", c.name.c_str(), std::string(to_string(c.status)).c_str());
  } else {
    std::cout << text;
  }
  if (!r.in_hypotheses) {
    Json err = {{"error", {{"kind", "hypothesis_violation"},
                           {"message", "lambda1 >= 0 or lambda0 == lambda1: outside the certified regime"}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return r.certified ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg) {
  const ProblemConfig& p = need_problem(cfg, "sweep");
  if (!cfg.sweep) throw Error(ErrorKind::config_error, "sweep needs a 'sweep' section");
  const SweepResult r = run_sweep(p, cfg.certificate, cfg.solver, *cfg.sweep);
  const std::string csv = sweep_csv(r);
  const std::string summary = sweep_summary_json(r);
  if (!cfg.output.directory.empty()) {
    write_file(cfg.output.directory, "sweep.csv", csv);
    write_file(cfg.output.directory, "summary.json", summary);
  }
  std::cout << (cfg.output.format == OutputFormat::json ? summary : csv);
  return r.all_passed() ? 0 : 1;
}

int cmd_check(const RunConfig& cfg) {
  const ProblemConfig& p = need_problem(cfg, "check-assumptions");
  const Measurements m = measure(p, cfg.certificate);
  Json j = to_json(m);
  const std::string text = dump(j);
  if (!cfg.output.directory.empty()) write_file(cfg.output.directory, "assumptions.json", text);
  std::cout << text;
  return m.assumptions.all_passed() ? 0 : 1;
}

void report_error(const std::string& kind, const std::string& message) {
  Json err = {{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified spectral-gap bounds for elliptic operators"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration")->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--precision", o.precision, "mantissa bits for the certificate");
    sub->add_option("--seed", o.seed, "eigensolver start-vector seed");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json", "table"}));
  };
  CLI::App* bound = app.add_subcommand("bound", "evaluate the constant chain and the gap bound");
  CLI::App* solve = app.add_subcommand("solve", "compute the two lowest eigenpairs and export fields");
  CLI::App* validate = app.add_subcommand("validate", "certify, solve and cross-check one configuration");
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  CLI::App* check = app.add_subcommand("check-assumptions", "measure geometry and check the standing assumptions");
  for (CLI::App* s : {bound, solve, validate, sweep, check}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("config_error", e.what());
    return 3;
  }

  try {
    const RunConfig cfg = load(o);
    if (*bound) return cmd_bound(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*validate) return cmd_validate(cfg);
    if (*sweep) return cmd_sweep(cfg);
    return cmd_check(cfg);
  } catch (const Error& e) {
    report_error(std::string(to_string(e.kind())), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error("internal_error", e.what());
    return 2;
  }
}
