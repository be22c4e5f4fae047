#include "holder/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "holder/error.hpp"
#include "holder/holder_dimension.hpp"
#include "holder/io.hpp"
#include "holder/multifractal.hpp"
#include "holder/oracle.hpp"
#include "holder/pressure.hpp"
#include "holder/reduce.hpp"
#include "holder/staircase.hpp"

namespace holder {

using nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  std::string config_path;
  std::optional<double> alpha;
  std::optional<double> qmin, qmax, qstep;
  double t_max = 100.0;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  unsigned workers = 1;

  // command-specific
  double s = 0.0;
  double q = 1.0;
  std::string method = "spectral";
  int level = 12;
  int points = 1001;
  double tol = 1e-12;
  std::int64_t n1 = 10;
  int levels = 6;
  int block = 0;
  double pmin = 0.01;
  double pmax = 0.99;
  double pstep = 0.01;
  std::string report_path;
  std::string curve_path;
};

class Csv {
 public:
  explicit Csv(std::ostream& os) : os_(os) {}
  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
    os_ << '\n';
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double x) { return format_number(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long x) { return std::to_string(x); }
  static std::string cell(long long x) { return std::to_string(x); }
  static std::string cell(unsigned long x) { return std::to_string(x); }
  static std::string cell(unsigned long long x) { return std::to_string(x); }
  static std::string cell(const std::string& x) { return x; }
  static std::string cell(const char* x) { return x; }
  std::ostream& os_;
};

double require_alpha(const RunConfig& rc) {
  if (!rc.alpha) throw Error(ErrorKind::malformed_config, "option '--alpha' is required");
  return *rc.alpha;
}

json meta(const RunConfig& rc) {
  return json{{"command", rc.command}, {"seed", rc.seed}};
}

SolverConfig solver_config(const RunConfig& rc) {
  SolverConfig cfg;
  cfg.t_max = rc.t_max;
  return cfg;
}

void cmd_pressure(const RunConfig& rc, const BuiltSystem& sys, std::ostream& os) {
  double p = 0.0;
  if (rc.method == "spectral") {
    p = sys.thermo.pressure(rc.s, rc.q);
  } else if (rc.method == "cylinder") {
    PotentialCombo combo(rc.s, rc.q, sys.thermo.phi(), sys.thermo.psi());
    p = pressure(PressureQuery{combo.materialize(), PressureMethod::cylinder_sum, rc.level,
                               rc.workers});
  } else {
    throw Error(ErrorKind::malformed_config, "option '--method' must be spectral or cylinder");
  }
  if (rc.format == "json") {
    os << json{{"meta", meta(rc)}, {"s", rc.s}, {"q", rc.q}, {"method", rc.method},
               {"pressure", p}}.dump(2)
       << '\n';
    return;
  }
  Csv csv(os);
  csv.header({"s", "q", "method", "pressure"});
  csv.row(rc.s, rc.q, rc.method, p);
}

void cmd_bowen(const RunConfig& rc, const BuiltSystem& sys, std::ostream& os) {
  const double delta = sys.thermo.delta();
  if (rc.format == "json") {
    os << json{{"meta", meta(rc)}, {"delta", delta}}.dump(2) << '\n';
    return;
  }
  Csv csv(os);
  csv.header({"delta"});
  csv.row(delta);
}

void cmd_spectrum(const RunConfig& rc, const BuiltSystem& sys, std::ostream& os) {
  std::vector<double> grid =
      uniform_grid(rc.qmin.value_or(-20.0), rc.qmax.value_or(20.0), rc.qstep.value_or(0.1));
  if (rc.alpha) {
    const GammaInversion inv = invert_gamma(sys.thermo, *rc.alpha);
    if (inv.exists()) grid = refine_grid(grid, inv.q0);
  }
  const SpectrumResult res = spectrum_scan(sys.thermo, grid, rc.workers);
  if (rc.format == "json") {
    json pts = json::array();
    for (const auto& p : res.points) {
      pts.push_back({{"q", p.q}, {"T", p.temperature}, {"gamma", p.gamma},
                     {"gamma_fd", p.gamma_fd}, {"H", p.spectrum}});
    }
    os << json{{"meta", meta(rc)},
               {"trivial", res.trivial},
               {"gamma_min", res.gamma_range.min},
               {"gamma_max", res.gamma_range.max},
               {"gamma_range_exact", res.gamma_range.exact},
               {"points", pts}}
              .dump(2)
       << '\n';
    return;
  }
  Csv csv(os);
  csv.header({"q", "T", "gamma", "H"});
  for (const auto& p : res.points) csv.row(p.q, p.temperature, p.gamma, p.spectrum);
}

void cmd_dims(const RunConfig& rc, const BuiltSystem& sys, std::ostream& os) {
  const double alpha = require_alpha(rc);
  const HolderAnalysis analysis(sys.thermo, alpha);
  const DimensionReport r = analysis.report();
  const std::vector<double> ts =
      uniform_grid(rc.qmin.value_or(-2.0), rc.qmax.value_or(2.0), rc.qstep.value_or(0.01));
  const double r0 = sys.thermo.fixed_point_ratio(0);
  const double r1 = sys.thermo.fixed_point_ratio(sys.thermo.alphabet() - 1);
  std::vector<double> betas(ts.size());
  parallel_for(ts.size(), rc.workers,
               [&](std::size_t i) { betas[i] = sys.thermo.beta(ts[i], alpha); });
  if (!rc.curve_path.empty()) {
    std::ofstream f(rc.curve_path);
    if (!f) throw Error(ErrorKind::malformed_config, "cannot write curve file " + rc.curve_path);
    Csv csv(f);
    csv.header({"t", "beta", "line0", "line1"});
    for (std::size_t i = 0; i < ts.size(); ++i) csv.row(ts[i], betas[i], -ts[i] * r0, -ts[i] * r1);
  }
  if (rc.format == "json") {
    json j{{"meta", meta(rc)}, {"report", report_to_json(r)}};
    j["curve"] = {{"t", ts}, {"beta", betas}, {"r0", r0}, {"r1", r1}};
    os << j.dump(2) << '\n';
    return;
  }
  Csv csv(os);
  csv.header({"alpha", "delta", "q0", "v0", "v1", "vbar", "H", "dimS0", "dimSinf", "dimS",
              "regime"});
  csv.row(r.alpha, r.delta, r.q0, r.v0, r.v1, r.vbar, r.spectrum, r.dim_s0, r.dim_sinf, r.dim_s,
          std::string(to_string(r.regime)));
}

void cmd_staircase(const RunConfig& rc, const BuiltSystem& sys, std::ostream& os) {
  if (rc.points < 2) throw Error(ErrorKind::malformed_config, "option '--points' must be >= 2");
  const GibbsMeasure mu(sys.thermo.psi());
  const Interval seed = sys.ifs.seed();
  std::vector<double> xs(static_cast<std::size_t>(rc.points));
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = seed.lo + seed.length() * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
  }
  parallel_for(xs.size(), rc.workers,
               [&](std::size_t i) { fs[i] = staircase_value(sys.ifs, mu, xs[i], rc.tol); });
  if (rc.format == "json") {
    os << json{{"meta", meta(rc)}, {"x", xs}, {"F", fs}}.dump(2) << '\n';
    return;
  }
  Csv csv(os);
  csv.header({"x", "F"});
  for (std::size_t i = 0; i < xs.size(); ++i) csv.row(xs[i], fs[i]);
}

void cmd_witness(const RunConfig& rc, const BuiltSystem& sys, std::ostream& os) {
  const double alpha = require_alpha(rc);
  WitnessOptions opt;
  opt.n1 = rc.n1;
  opt.levels = rc.levels;
  opt.block_symbol = rc.block;
  const WitnessCoding w = construct_witness(sys.thermo, alpha, opt);
  if (rc.format == "json") {
    json j = witness_to_json(w);
    j["meta"] = meta(rc);
    os << j.dump(2) << '\n';
    return;
  }
  Csv csv(os);
  csv.header({"k", "n", "M", "m", "N", "l", "log_diagnostic"});
  for (std::size_t k = 0; k < w.plan.n.size(); ++k) {
    csv.row(static_cast<long long>(k + 1), static_cast<long long>(w.plan.n[k]),
            static_cast<long long>(w.plan.words[k]), static_cast<long long>(w.plan.zeros[k]),
            static_cast<long long>(w.plan.target[k]),
            static_cast<unsigned long long>(w.filler_end[k]), w.log_diagnostic[k]);
  }
}

std::vector<double> sweep_weights(const SystemConfig& cfg, double p0) {
  const std::size_t m = cfg.maps.size();
  std::vector<double> w(m, 0.0);
  w[0] = p0;
  double rest = 0.0;
  if (cfg.weights) {
    for (std::size_t j = 1; j < m; ++j) rest += (*cfg.weights)[j];
  }
  for (std::size_t j = 1; j < m; ++j) {
    const double share = rest > 0.0 ? (*cfg.weights)[j] / rest : 1.0 / static_cast<double>(m - 1);
    w[j] = (1.0 - p0) * share;
  }
  return w;
}

void cmd_sweep(const RunConfig& rc, const SystemConfig& cfg, const SolverConfig& solver,
               std::ostream& os, std::ostream& err) {
  const double alpha = require_alpha(rc);
  if (cfg.maps.size() < 2) throw Error(ErrorKind::invalid_argument, "sweep needs two or more maps");
  if (cfg.potential) {
    throw Error(ErrorKind::malformed_config, "config field 'weights': sweep varies Bernoulli weights");
  }
  if (!(rc.pmin > 0.0) || !(rc.pmax < 1.0) || !(rc.pmax >= rc.pmin)) {
    throw Error(ErrorKind::invalid_argument, "sweep range must satisfy 0 < pmin <= pmax < 1");
  }
  const Ifs ifs = Ifs::affine(cfg.maps, cfg.seed);
  const LocallyConstantPotential phi = geometric_potential(ifs);
  const SystemFamily family = [&](double p0) {
    return ThermoSystem(phi, bernoulli_potential(sweep_weights(cfg, p0), true), solver);
  };
  const std::vector<double> ps = uniform_grid(rc.pmin, rc.pmax, rc.pstep);
  std::vector<DimensionReport> rows(ps.size());
  parallel_for(ps.size(), rc.workers, [&](std::size_t i) {
    const ThermoSystem sys = family(ps[i]);
    rows[i] = analyze(sys, alpha);
  });
  const std::vector<double> transitions =
      rc.pmax > rc.pmin ? phase_transition_locus(family, alpha, rc.pmin, rc.pmax, rc.pstep)
                        : std::vector<double>{};
  if (rc.format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      json r = report_to_json(rows[i]);
      r["p"] = ps[i];
      arr.push_back(r);
    }
    os << json{{"meta", meta(rc)}, {"rows", arr}, {"transitions", transitions}}.dump(2) << '\n';
    return;
  }
  Csv csv(os);
  csv.header({"p", "delta", "q0", "vbar", "dimS0", "dimSinf", "dimS", "regime"});
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& r = rows[i];
    csv.row(ps[i], r.delta, r.q0, r.vbar, r.dim_s0, r.dim_sinf, r.dim_s,
            std::string(to_string(r.regime)));
  }
  for (double t : transitions) err << "transition at p0 = " << format_number(t) << '\n';
}

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
};

std::vector<Check> run_checks(const RunConfig& rc, const BuiltSystem& sys) {
  const ThermoSystem& th = sys.thermo;
  const double alpha = rc.alpha.value_or(1.0);
  std::vector<Check> checks;
  const auto add = [&](std::string name, double measured, double tol) {
    checks.push_back({std::move(name), std::abs(measured) <= tol, measured});
  };
  add("T(0)-delta", th.temperature(0.0) - th.delta(), 1e-10);
  add("T(1)", th.temperature(1.0), 1e-10);
  add("beta(0)-delta", th.beta(0.0, alpha) - th.delta(), 1e-10);
  add("beta(1)-alpha", th.beta(1.0, alpha) - alpha, 1e-10);

  std::mt19937_64 rng(rc.seed);
  std::uniform_real_distribution<double> tdist(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double t = tdist(rng);
    const double d = th.beta(t, alpha) - (th.temperature(t) + alpha * t);
    if (std::abs(d) > std::abs(worst)) worst = d;
  }
  add("beta(t)-T(t)-alpha*t", worst, 1e-9);

  worst = 0.0;
  for (double q = -5.0; q <= 5.0; q += 1.0) {
    const double d = th.gamma_gibbs(q) -
                     -fd_derivative([&](double x) { return th.temperature(x); }, q, 1e-5);
    if (std::abs(d) > std::abs(worst)) worst = d;
  }
  add("gamma_gibbs-gamma_fd", worst, 1e-6);

  const int n = 12;
  const PotentialCombo combo(th.delta(), 0.5, th.phi(), th.psi());
  const LocallyConstantPotential pot = combo.materialize();
  const double spectral = pressure(pot);
  if (th.depth() == 1) {
    add("pressure_direct-spectral", pressure_direct(pot, n, rc.workers) - spectral, 1e-12);
  } else {
    const double d_small = pressure_direct(pot, n / 2, rc.workers) - spectral;
    const double d_large = pressure_direct(pot, n, rc.workers) - spectral;
    checks.push_back({"pressure_direct-spectral shrinks", std::abs(d_large) < std::abs(d_small),
                      d_large});
  }

  const GibbsMeasure mu(th.psi());
  double total = 0.0;
  for (std::uint64_t i = 0; i < checked_word_count(th.alphabet(), 10); ++i) {
    total += mu.cylinder(word_at(th.alphabet(), 10, i));
  }
  add("gibbs_mass_level10-1", total - 1.0, 1e-10);

  if (th.depth() == 1) {
    std::vector<double> weights;
    for (std::size_t j = 0; j < th.psi().table_size(); ++j) weights.push_back(std::exp(th.psi().value(j)));
    int depth = 1;
    while (depth < 20 && std::pow(static_cast<double>(th.alphabet()), depth + 1) <= 1 << 20) ++depth;
    std::vector<double> xs;
    for (int i = 0; i <= 20; ++i) {
      xs.push_back(sys.ifs.seed().lo + sys.ifs.seed().length() * i / 20.0);
    }
    const auto brackets = staircase_oracle(sys.ifs, weights, depth, xs);
    double excess = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double f = staircase_value(sys.ifs, mu, xs[i], 1e-12);
      excess = std::max({excess, brackets[i].lo - f, f - brackets[i].hi});
    }
    add("staircase_outside_oracle_bracket", std::max(0.0, excess), 1e-9);
  }

  const DimensionReport r = analyze(th, alpha);
  add("dim_S_routes", r.dim_s_scan - r.dim_s_closed, 1e-8);
  return checks;
}

int cmd_verify(const RunConfig& rc, const BuiltSystem& sys, std::ostream& os) {
  std::vector<Check> checks = run_checks(rc, sys);
  if (!rc.report_path.empty()) {
    std::ifstream in(rc.report_path);
    if (!in) throw Error(ErrorKind::malformed_config, "cannot open report " + rc.report_path);
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::malformed_config, std::string("report is not valid JSON: ") + e.what());
    }
    const DimensionReport stored = report_from_json(j.contains("report") ? j["report"] : j);
    const DimensionReport fresh = analyze(sys.thermo, stored.alpha);
    checks.push_back({std::string("report_regime ") + to_string(stored.regime),
                      stored.regime == fresh.regime, fresh.dim_s - stored.dim_s});
    checks.push_back({"report_dim_S", std::abs(fresh.dim_s - stored.dim_s) <= 1e-9,
                      fresh.dim_s - stored.dim_s});
  }
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.pass;
  if (rc.format == "json") {
    json arr = json::array();
    for (const auto& c : checks) {
      arr.push_back({{"check", c.name}, {"pass", c.pass}, {"measured", c.measured}});
    }
    os << json{{"meta", meta(rc)}, {"checks", arr}, {"pass", ok}}.dump(2) << '\n';
  } else {
    Csv csv(os);
    csv.header({"check", "status", "measured"});
    for (const auto& c : checks) csv.row(c.name, std::string(c.pass ? "PASS" : "FAIL"), c.measured);
  }
  return ok ? exit_ok : exit_numerical;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_config: return exit_malformed_config;
    case ErrorKind::numerical_inconsistency:
    case ErrorKind::bracket_failure:
    case ErrorKind::eigensolver:
    case ErrorKind::unresolved: return exit_numerical;
    default: return exit_validation;
  }
}

int dispatch(RunConfig& rc, std::ostream& os, std::ostream& err) {
  if (rc.format != "csv" && rc.format != "json") {
    throw Error(ErrorKind::malformed_config, "option '--format' must be csv or json");
  }
  if (rc.config_path.empty()) throw Error(ErrorKind::malformed_config, "option '--config' is required");
  const SystemConfig cfg = load_system_config(rc.config_path);
  const SolverConfig solver = solver_config(rc);
  if (rc.command == "sweep") {
    cmd_sweep(rc, cfg, solver, os, err);
    return exit_ok;
  }
  const BuiltSystem sys = build_system(cfg, solver);
  for (const auto& w : sys.warnings) err << "warning: " << w << '\n';
  if (rc.command == "pressure") cmd_pressure(rc, sys, os);
  else if (rc.command == "bowen") cmd_bowen(rc, sys, os);
  else if (rc.command == "spectrum") cmd_spectrum(rc, sys, os);
  else if (rc.command == "dims") cmd_dims(rc, sys, os);
  else if (rc.command == "staircase") cmd_staircase(rc, sys, os);
  else if (rc.command == "witness") cmd_witness(rc, sys, os);
  else if (rc.command == "verify") return cmd_verify(rc, sys, os);
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Thermodynamic formalism and Hoelder-derivative dimensions for devil's staircases"};
  app.require_subcommand(1);
  app.add_option("--config", rc.config_path, "system JSON config");
  app.add_option("--alpha", rc.alpha, "Hoelder exponent");
  app.add_option("--qmin", rc.qmin, "grid start (q for spectrum, t for dims)");
  app.add_option("--qmax", rc.qmax, "grid end");
  app.add_option("--qstep", rc.qstep, "grid step");
  app.add_option("--tmax", rc.t_max, "clamp for q and t searches")->check(CLI::PositiveNumber);
  app.add_option("--out", rc.out_path, "output file (default stdout)");
  app.add_option("--format", rc.format, "csv or json");
  app.add_option("--seed", rc.seed, "RNG seed for randomized checks");
  app.add_option("--workers", rc.workers, "worker threads (0 = hardware)");

  auto* pressure_cmd = app.add_subcommand("pressure", "P(s phi + q psi)");
  pressure_cmd->add_option("--s", rc.s, "coefficient of phi");
  pressure_cmd->add_option("--q", rc.q, "coefficient of psi");
  pressure_cmd->add_option("--method", rc.method, "spectral or cylinder");
  pressure_cmd->add_option("--level", rc.level, "first cylinder level for the cylinder method");
  app.add_subcommand("bowen", "root of P(s phi) = 0");
  app.add_subcommand("spectrum", "table of q, T(q), gamma(q), H(gamma(q))");
  auto* dims_cmd = app.add_subcommand("dims", "dimension report for one alpha");
  dims_cmd->add_option("--curve", rc.curve_path, "CSV file for beta(t) and the constraint lines");
  auto* stair_cmd = app.add_subcommand("staircase", "samples of the distribution function");
  stair_cmd->add_option("--points", rc.points, "grid points");
  stair_cmd->add_option("--tol", rc.tol, "measure tolerance of the descent");
  auto* witness_cmd = app.add_subcommand("witness", "coding with designed block runs");
  witness_cmd->add_option("--n1", rc.n1, "first block size");
  witness_cmd->add_option("--levels", rc.levels, "number of alternations");
  witness_cmd->add_option("--block", rc.block, "block symbol");
  auto* sweep_cmd = app.add_subcommand("sweep", "dimension reports across p0");
  sweep_cmd->add_option("--pmin", rc.pmin, "first p0");
  sweep_cmd->add_option("--pmax", rc.pmax, "last p0");
  sweep_cmd->add_option("--pstep", rc.pstep, "p0 step");
  auto* verify_cmd = app.add_subcommand("verify", "oracle cross-checks");
  verify_cmd->add_option("--report", rc.report_path, "stored dimension report to re-check");
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_malformed_config;
  }
  rc.command = app.get_subcommands().front()->get_name();

  try {
    if (rc.out_path.empty()) return dispatch(rc, out, err);
    std::ostringstream buffer;
    const int code = dispatch(rc, buffer, err);
    std::ofstream f(rc.out_path, std::ios::binary);
    if (!f) throw Error(ErrorKind::malformed_config, "cannot write output file " + rc.out_path);
    f << buffer.str();
    return code;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
}

}  // namespace holder
