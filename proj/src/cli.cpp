#include "qffcr/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qffcr/figures.hpp"
#include "qffcr/optimizer.hpp"
#include "qffcr/report.hpp"
#include "qffcr/validation.hpp"

namespace qffcr::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Options of one subcommand, plus how to echo each one's effective value.
class Command {
 public:
  Command(CLI::App& app, const std::string& name, const std::string& help)
      : sub_(app.add_subcommand(name, help)), name_(name) {
    sub_->add_option("--config", config_path_, "flat key=value file; command-line flags take precedence");
  }

  CLI::App* app() const { return sub_; }
  const std::string& name() const { return name_; }
  const std::string& config_path() const { return config_path_; }

  CLI::Option* real(const std::string& key, double& v, const std::string& help) {
    echo_.emplace_back(key, [&v] { return report::format_double(v); });
    return sub_->add_option("--" + key, v, help);
  }
  CLI::Option* integer(const std::string& key, int& v, const std::string& help) {
    echo_.emplace_back(key, [&v] { return std::to_string(v); });
    return sub_->add_option("--" + key, v, help);
  }
  CLI::Option* count(const std::string& key, std::uint64_t& v, const std::string& help) {
    echo_.emplace_back(key, [&v] { return std::to_string(v); });
    return sub_->add_option("--" + key, v, help);
  }
  CLI::Option* text(const std::string& key, std::string& v, const std::string& help) {
    echo_.emplace_back(key, [&v] { return v; });
    return sub_->add_option("--" + key, v, help);
  }
  CLI::Option* flag(const std::string& key, bool& v, const std::string& help) {
    echo_.emplace_back(key, [&v] { return std::string(v ? "true" : "false"); });
    return sub_->add_flag("--" + key, v, help);
  }
  // Not echoed: where output goes does not change the data.
  CLI::Option* quiet_text(const std::string& key, std::string& v, const std::string& help) {
    return sub_->add_option("--" + key, v, help);
  }

  void apply_config() {
    if (config_path_.empty()) return;
    std::ifstream in(config_path_);
    if (!in) throw UsageError("cannot read config file '" + config_path_ + "'");
    for (const auto& [key, value] : parse_flat_config(in)) {
      CLI::Option* opt = sub_->get_option_no_throw("--" + key);
      if (opt == nullptr || key == "config") {
        throw UsageError("config key '" + key + "' is not an option of '" + name_ + "'");
      }
      if (opt->count() > 0) continue;
      opt->add_result(value);
      opt->run_callback();
    }
  }

  std::vector<std::pair<std::string, std::string>> effective() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, get] : echo_) out.emplace_back(k, get());
    return out;
  }

 private:
  CLI::App* sub_;
  std::string name_;
  std::string config_path_;
  std::vector<std::pair<std::string, std::function<std::string()>>> echo_;
};

struct PointSettings {
  int n = 10;
  double gamma = kPi / 2;
  double phi0 = 0.0;
  double theta = kPi / 2;
  double eta = 0.0;
  double r = 0.0;
};

struct EngineSettings {
  std::string engine = "structured";
  std::string convention = "paper";
  std::string reading = "class_weighted";
  bool wide_theta = false;
  int dense_limit = kDenseMaxQubits;
};

struct OutputSettings {
  std::string format = "csv";
  std::string output = "-";
  std::string threads = "1";
};

struct GridSettings {
  double theta_lo = 0.0;
  double theta_hi = std::nan("");  // resolved from wide-theta when not given
  int theta_steps = 181;
  double eta_lo = 0.0;
  double eta_hi = 2 * kPi;
  int eta_steps = 181;
  bool eta_closed = false;
  int refine = 3;
  double shrink = 0.2;
};

void add_point(Command& c, PointSettings& s, bool with_angles) {
  c.integer("n", s.n, "number of qubits");
  c.real("gamma", s.gamma, "input amplitude angle, alpha = cos(gamma/2)");
  c.real("phi0", s.phi0, "input relative phase");
  if (with_angles) {
    c.real("theta", s.theta, "measurement strength");
    c.real("eta", s.eta, "rotation angle");
  }
  c.real("r", s.r, "damping probability");
}

void add_engine(Command& c, EngineSettings& s) {
  c.text("engine", s.engine, "dense | structured | closedform_appendix | closedform_verbatim");
  c.text("convention", s.convention, "paper | physical");
  c.text("reading", s.reading, "fidelity aggregation: class_weighted | p0_literal");
  c.flag("wide-theta", s.wide_theta, "admit theta in [0, pi]");
  c.integer("dense-limit", s.dense_limit, "largest N the dense engine accepts");
}

void add_output(Command& c, OutputSettings& s, bool with_threads) {
  c.quiet_text("format", s.format, "csv | json");
  c.quiet_text("output", s.output, "file path, '-' for stdout");
  if (with_threads) {
    c.quiet_text("threads", s.threads, "worker threads or 'auto'")->envname("QFFCR_THREADS");
  }
}

void add_grid(Command& c, GridSettings& g) {
  c.real("theta-lo", g.theta_lo, "theta grid start");
  c.real("theta-hi", g.theta_hi, "theta grid end (default pi/2, or pi with --wide-theta)");
  c.integer("theta-steps", g.theta_steps, "theta grid points");
  c.real("eta-lo", g.eta_lo, "eta grid start");
  c.real("eta-hi", g.eta_hi, "eta grid end");
  c.integer("eta-steps", g.eta_steps, "eta grid points");
  c.flag("eta-closed", g.eta_closed, "include eta-hi itself (otherwise the eta axis is periodic)");
  c.integer("refine", g.refine, "refinement rounds");
  c.real("shrink", g.shrink, "refinement window factor in (0, 1)");
}

ProtocolParams to_params(const PointSettings& s) {
  ProtocolParams p;
  p.n_qubits = s.n;
  p.gamma = s.gamma;
  p.phi0 = s.phi0;
  p.theta = s.theta;
  p.eta = s.eta;
  p.r = s.r;
  return p;
}

EvalConfig to_eval(const EngineSettings& s) {
  EvalConfig cfg;
  const auto e = parse_engine(s.engine);
  if (!e) throw UsageError("unknown engine '" + s.engine + "'");
  const auto c = parse_convention(s.convention);
  if (!c) throw UsageError("unknown convention '" + s.convention + "'");
  if (s.reading == "class_weighted") {
    cfg.reading = FidelityReading::class_weighted;
  } else if (s.reading == "p0_literal") {
    cfg.reading = FidelityReading::p0_literal;
  } else {
    throw UsageError("unknown fidelity reading '" + s.reading + "'");
  }
  if (s.dense_limit < 1 || s.dense_limit > 12) throw UsageError("dense-limit must lie in [1, 12]");
  cfg.engine = *e;
  cfg.convention = *c;
  cfg.limits.wide_theta = s.wide_theta;
  cfg.dense.max_qubits = s.dense_limit;
  cfg.dense.wide_theta = s.wide_theta;
  return cfg;
}

GridSpec to_grid(GridSettings& g, bool wide) {
  if (std::isnan(g.theta_hi)) g.theta_hi = wide ? kPi : kPi / 2;
  GridSpec spec;
  spec.theta = {g.theta_lo, g.theta_hi, g.theta_steps, false};
  spec.eta = {g.eta_lo, g.eta_hi, g.eta_steps, !g.eta_closed};
  spec.refine_iters = g.refine;
  spec.refine_shrink = g.shrink;
  spec.validate();
  return spec;
}

int to_threads(const std::string& s) {
  if (s == "auto") return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  try {
    std::size_t used = 0;
    const int t = std::stoi(s, &used);
    if (used != s.size() || t < 1) throw std::invalid_argument(s);
    return t;
  } catch (const std::exception&) {
    throw UsageError("threads must be a positive integer or 'auto', got '" + s + "'");
  }
}

report::Format to_format(const std::string& s) {
  const auto f = report::parse_format(s);
  if (!f) throw UsageError("unknown format '" + s + "'");
  return *f;
}

void emit(const OutputSettings& o, const report::Header& h, const report::Table& t, std::ostream& out) {
  const report::Format f = to_format(o.format);
  if (o.output == "-") {
    report::write(out, f, h, t);
    return;
  }
  std::ofstream file(o.output);
  if (!file) throw UsageError("cannot open output file '" + o.output + "'");
  report::write(file, f, h, t);
}

std::vector<double> r_range(double from, double to, double step) {
  if (!(step > 0.0) || !(to >= from)) throw UsageError("need r-step > 0 and r-to >= r-from");
  std::vector<double> rs;
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) rs.push_back(std::min(to, from + static_cast<double>(i) * step));
  return rs;
}

}  // namespace

std::map<std::string, std::string> parse_flat_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  bool echoed = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(line);
    if (body.empty()) continue;
    if (body.rfind("#cfg ", 0) == 0) {
      echoed = true;
      body = trim(body.substr(5));
    } else if (body[0] == '#') {
      continue;
    } else if (echoed) {
      break;  // data rows of an echoed output file
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(body.substr(eq + 1));
  }
  return out;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feed-forward and reversal protection of GHZ states under amplitude damping"};
  app.require_subcommand(1);

  // metrics
  Command metrics(app, "metrics", "evaluate one parameter point");
  PointSettings m_point;
  EngineSettings m_engine;
  OutputSettings m_out;
  add_point(metrics, m_point, true);
  add_engine(metrics, m_engine);
  add_output(metrics, m_out, false);

  // optimize
  Command optimize(app, "optimize", "maximize a metric over (theta, eta) at one r");
  PointSettings o_point;
  EngineSettings o_engine;
  OutputSettings o_out;
  GridSettings o_grid;
  std::string o_objective = "qfi";
  std::string o_constraint = "none";
  add_point(optimize, o_point, false);
  add_engine(optimize, o_engine);
  add_grid(optimize, o_grid);
  optimize.text("objective", o_objective, "qfi | fidelity | probability");
  optimize.text("constraint", o_constraint, "none | unit-probability");
  add_output(optimize, o_out, true);

  // sweep
  Command sweep(app, "sweep", "optimize at every r of a grid");
  PointSettings s_point;
  EngineSettings s_engine;
  OutputSettings s_out;
  GridSettings s_grid;
  std::string s_objective = "qfi";
  std::string s_constraint = "none";
  double r_from = 0.0;
  double r_to = 0.95;
  double r_step = 0.05;
  add_point(sweep, s_point, false);
  add_engine(sweep, s_engine);
  add_grid(sweep, s_grid);
  sweep.text("objective", s_objective, "qfi | fidelity | probability");
  sweep.text("constraint", s_constraint, "none | unit-probability");
  sweep.real("r-from", r_from, "first r");
  sweep.real("r-to", r_to, "last r");
  sweep.real("r-step", r_step, "r spacing");
  add_output(sweep, s_out, true);

  // pareto
  Command pareto(app, "pareto", "fidelity/probability pairs over a (theta, eta) grid");
  PointSettings p_point;
  EngineSettings p_engine;
  OutputSettings p_out;
  GridSettings p_grid;
  p_point.r = 0.5;
  p_engine.wide_theta = true;
  p_grid.eta_hi = kPi;
  p_grid.eta_closed = true;
  p_grid.refine = 0;
  add_point(pareto, p_point, false);
  add_engine(pareto, p_engine);
  add_grid(pareto, p_grid);
  add_output(pareto, p_out, true);

  // figure
  Command figure(app, "figure", "regenerate the data behind one figure");
  std::string f_id;
  FigureOptions f_opts;
  std::string f_engine = "structured";
  std::string f_convention = "paper";
  OutputSettings f_out;
  figure.text("id", f_id, "2a 2b 2c 3a 3b 4a 4b 5 6a 6b")->required();
  figure.integer("n", f_opts.n_qubits, "number of qubits");
  figure.integer("steps", f_opts.steps, "grid points per axis");
  figure.integer("refine", f_opts.refine_iters, "refinement rounds");
  figure.real("r", f_opts.r, "damping probability (figure 5)");
  figure.text("engine", f_engine, "structured | dense | closedform_appendix | closedform_verbatim");
  figure.text("convention", f_convention, "paper | physical");
  add_output(figure, f_out, true);

  // validate
  Command validate(app, "validate", "run the cross-engine self-check suite");
  std::uint64_t v_seed = 1;
  std::string v_fault = "none";
  validate.count("seed", v_seed, "random seed for parameter tuples");
  validate.quiet_text("inject-fault", v_fault, "")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    for (Command* c : {&metrics, &optimize, &sweep, &pareto, &figure, &validate}) {
      if (c->app()->parsed()) c->apply_config();
    }

    if (metrics.app()->parsed()) {
      const EvalConfig cfg = to_eval(m_engine);
      const MetricsRow row = make_evaluator(cfg)(to_params(m_point));
      emit(m_out, {"metrics", metrics.effective(), {}}, report::metrics_table({row}), out);
      return kOk;
    }

    if (optimize.app()->parsed() || sweep.app()->parsed()) {
      const bool is_sweep = sweep.app()->parsed();
      Command& cmd = is_sweep ? sweep : optimize;
      PointSettings& point = is_sweep ? s_point : o_point;
      EngineSettings& eng = is_sweep ? s_engine : o_engine;
      GridSettings& grid_s = is_sweep ? s_grid : o_grid;
      OutputSettings& o = is_sweep ? s_out : o_out;
      const std::string& objective = is_sweep ? s_objective : o_objective;
      const std::string& constraint = is_sweep ? s_constraint : o_constraint;

      const EvalConfig cfg = to_eval(eng);
      const GridSpec grid = to_grid(grid_s, eng.wide_theta);
      OptOptions opts;
      opts.threads = to_threads(o.threads);
      const auto obj = parse_objective(objective);
      if (!obj) throw UsageError("unknown objective '" + objective + "'");
      SweepMode mode = *obj == Objective::qfi        ? SweepMode::qfi
                       : *obj == Objective::fidelity ? SweepMode::fidelity
                                                     : SweepMode::probability;
      if (constraint == "unit-probability") {
        if (*obj != Objective::fidelity) throw UsageError("unit-probability constraint needs --objective fidelity");
        mode = SweepMode::unit_probability;
      } else if (constraint != "none") {
        throw UsageError("unknown constraint '" + constraint + "'");
      }
      const std::vector<double> rs = is_sweep ? r_range(r_from, r_to, r_step) : std::vector<double>{point.r};
      const auto rows = sweep_r(mode, rs, to_params(point), grid, cfg, opts);
      report::Header h{cmd.name(), cmd.effective(), {}};
      if (is_sweep) {
        emit(o, h, report::sweep_table(rows), out);
      } else {
        emit(o, h, report::opt_table({rows.front().opt}), out);
      }
      return kOk;
    }

    if (pareto.app()->parsed()) {
      const EvalConfig cfg = to_eval(p_engine);
      const GridSpec grid = to_grid(p_grid, p_engine.wide_theta);
      OptOptions opts;
      opts.threads = to_threads(p_out.threads);
      const ParetoScan scan = pareto_scan(p_point.r, to_params(p_point), grid, cfg, opts);
      emit(p_out, {"pareto", pareto.effective(), {}}, report::pareto_table(scan), out);
      return kOk;
    }

    if (figure.app()->parsed()) {
      const auto e = parse_engine(f_engine);
      if (!e) throw UsageError("unknown engine '" + f_engine + "'");
      const auto c = parse_convention(f_convention);
      if (!c) throw UsageError("unknown convention '" + f_convention + "'");
      f_opts.engine = *e;
      f_opts.convention = *c;
      f_opts.threads = to_threads(f_out.threads);
      FigureData data = make_figure(f_id, f_opts);
      emit(f_out, {"figure", figure.effective(), data.notes}, data.table, out);
      return kOk;
    }

    if (validate.app()->parsed()) {
      Fault fault = Fault::none;
      if (v_fault == "a0-sign") {
        fault = Fault::a0_sign;
      } else if (v_fault != "none") {
        throw UsageError("unknown fault '" + v_fault + "'");
      }
      const ValidationReport rep = run_validation(v_seed, fault);
      print_report(out, rep);
      return rep.all_pass() ? kOk : kValidationFailed;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericDegeneracy& e) {
    err << "error: numeric degeneracy: " << e.what() << '\n';
    return kDegenerate;
  } catch (const ConstraintInfeasible& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  }
  return kUsage;
}

}  // namespace qffcr::cli
