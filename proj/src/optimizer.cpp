#include "qffcr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "qffcr/closed_form.hpp"

namespace qffcr {

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::qfi: return "qfi";
    case Objective::fidelity: return "fidelity";
    case Objective::probability: return "probability";
  }
  return "unknown";
}

std::optional<Objective> parse_objective(std::string_view s) {
  for (Objective o : {Objective::qfi, Objective::fidelity, Objective::probability}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

std::string_view to_string(SweepMode m) {
  switch (m) {
    case SweepMode::qfi: return "qfi";
    case SweepMode::fidelity: return "fidelity";
    case SweepMode::probability: return "probability";
    case SweepMode::unit_probability: return "unit-probability";
  }
  return "unknown";
}

double metric_of(const MetricsRow& row, Objective o) {
  switch (o) {
    case Objective::qfi: return row.qfi;
    case Objective::fidelity: return row.fidelity;
    case Objective::probability: return row.probability;
  }
  return row.qfi;
}

double Axis::spacing() const { return (hi - lo) / (half_open ? steps : steps - 1); }

double Axis::at(int i) const {
  if (i == steps - 1 && !half_open) return hi;
  return lo + i * spacing();
}

void GridSpec::validate() const {
  for (const auto* ax : {&theta, &eta}) {
    if (ax->steps < 2) throw DomainError("steps", "grid axes need at least 2 steps");
    if (!std::isfinite(ax->lo) || !std::isfinite(ax->hi) || !(ax->hi > ax->lo)) {
      throw DomainError("range", "grid axis needs finite lo < hi");
    }
  }
  if (refine_iters < 0) throw DomainError("refine_iters", "must be >= 0");
  if (!(refine_shrink > 0.0 && refine_shrink < 1.0)) {
    throw DomainError("refine_shrink", "must lie in (0, 1)");
  }
}

long long GridSpec::evaluation_count() const {
  return static_cast<long long>(theta.steps) * eta.steps * (1 + refine_iters);
}

GridSpec GridSpec::wide() {
  GridSpec g;
  g.theta.hi = kPi;
  return g;
}

namespace {

// QFI of the input state. The protocol is a phase-independent instrument, so
// the probability-averaged QFI cannot exceed it.
double input_qfi(const ProtocolParams& p) {
  const double n = p.n_qubits;
  return 4.0 * std::norm(p.alpha()) * std::norm(p.beta()) * n * n;
}

struct Candidate {
  double theta;
  double eta;
  std::optional<MetricsRow> row;
};

template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t end = std::min(n, (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void evaluate_all(std::vector<Candidate>& cands, const Evaluator& eval, const ProtocolParams& base,
                  int threads) {
  parallel_for(cands.size(), threads, [&](std::size_t i) {
    ProtocolParams p = base;
    p.theta = cands[i].theta;
    p.eta = cands[i].eta;
    try {
      cands[i].row = eval(p);
    } catch (const NumericDegeneracy&) {
      cands[i].row.reset();
    }
  });
}

// Ordered fold; see the tie rule in the README.
struct Incumbent {
  bool set = false;
  double theta = 0.0;
  double eta = 0.0;
  double value = 0.0;
  MetricsRow row;

  void offer(double th, double et, double v, const MetricsRow& r) {
    const bool better = !set || v > value + 1e-12 * std::max(1.0, std::abs(value)) ||
                        (v >= value && std::pair{th, et} < std::pair{theta, eta});
    if (better) {
      set = true;
      theta = th;
      eta = et;
      value = v;
      row = r;
    }
  }
};

using Accept = std::function<bool(const MetricsRow&)>;

void fold(const std::vector<Candidate>& cands, Objective obj, const Accept& accept, Incumbent& inc,
          long long& infeasible) {
  for (const auto& c : cands) {
    if (!c.row || !accept(*c.row)) {
      ++infeasible;
      continue;
    }
    inc.offer(c.theta, c.eta, metric_of(*c.row, obj), *c.row);
  }
}

std::vector<double> axis_values(const Axis& ax) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(ax.steps));
  for (int i = 0; i < ax.steps; ++i) v.push_back(ax.at(i));
  return v;
}

// Window of width span around c, kept inside a closed axis or wrapped on a periodic one.
std::vector<double> refined_values(const Axis& ax, double c, double span) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(ax.steps));
  const double width = ax.hi - ax.lo;
  double lo = c - span / 2;
  double hi = c + span / 2;
  if (!ax.half_open) {
    if (span >= width) {
      lo = ax.lo;
      hi = ax.hi;
    } else if (lo < ax.lo) {
      lo = ax.lo;
      hi = ax.lo + span;
    } else if (hi > ax.hi) {
      hi = ax.hi;
      lo = ax.hi - span;
    }
  }
  for (int i = 0; i < ax.steps; ++i) {
    double x = i == ax.steps - 1 ? hi : lo + i * (hi - lo) / (ax.steps - 1);
    if (ax.half_open) {
      x = ax.lo + std::fmod(x - ax.lo, width);
      if (x < ax.lo) x += width;
      if (x >= ax.hi) x = ax.lo;
    }
    v.push_back(x);
  }
  return v;
}

std::vector<Candidate> product(const std::vector<double>& thetas, const std::vector<double>& etas) {
  std::vector<Candidate> out;
  out.reserve(thetas.size() * etas.size());
  for (double th : thetas) {
    for (double et : etas) out.push_back({th, et, std::nullopt});
  }
  return out;
}

void check_grid_domain(const GridSpec& grid, const EvalConfig& cfg) {
  grid.validate();
  const double theta_max = cfg.limits.wide_theta ? kPi : kPi / 2;
  if (grid.theta.lo < 0.0 || grid.theta.hi > theta_max + kThetaSlack) {
    throw DomainError("theta", "grid range outside the evaluator's theta domain");
  }
  if (grid.eta.lo < 0.0 || grid.eta.hi > 2 * kPi + 1e-15 ||
      (grid.eta.hi >= 2 * kPi && !grid.eta.half_open)) {
    throw DomainError("eta", "grid range outside [0, 2pi)");
  }
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

OptResult finish(Objective obj, double r, const Incumbent& inc, const EvalConfig& cfg,
                 const GridSpec& grid, bool eta_fixed) {
  OptResult res;
  res.r = r;
  res.objective = obj;
  res.theta_star = inc.theta;
  res.eta_star = inc.eta;
  res.value = inc.value;
  res.companion = inc.row;
  res.engine = cfg.engine;
  res.convention = cfg.convention;
  res.on_boundary = near(inc.theta, grid.theta.lo) || near(inc.theta, grid.theta.hi);
  if (!eta_fixed && !grid.eta.half_open) {
    res.on_boundary = res.on_boundary || near(inc.eta, grid.eta.lo) || near(inc.eta, grid.eta.hi);
  }
  return res;
}

}  // namespace

OptResult maximize_metric(Objective objective, double r, const ProtocolParams& base,
                          const GridSpec& grid, const EvalConfig& cfg, const OptOptions& opts) {
  check_grid_domain(grid, cfg);
  const Evaluator eval = make_evaluator(cfg);
  ProtocolParams p = base;
  p.r = r;
  p.theta = grid.theta.lo;
  p.eta = grid.eta.lo;
  validate_params(p, cfg.limits);

  const double tol = opts.feasibility_tol;
  const double cap = input_qfi(p);
  const Accept accept = [tol, cap](const MetricsRow& row) { return row.physical(tol, cap); };

  Incumbent inc;
  long long evaluations = 0;
  long long infeasible = 0;
  std::vector<double> history;

  std::vector<Candidate> cands = product(axis_values(grid.theta), axis_values(grid.eta));
  evaluate_all(cands, eval, p, opts.threads);
  evaluations += static_cast<long long>(cands.size());
  fold(cands, objective, accept, inc, infeasible);
  if (!inc.set) throw NumericDegeneracy("no feasible grid point");
  history.push_back(inc.value);

  double span_theta = grid.theta.hi - grid.theta.lo;
  double span_eta = grid.eta.hi - grid.eta.lo;
  for (int it = 0; it < grid.refine_iters; ++it) {
    span_theta *= grid.refine_shrink;
    span_eta *= grid.refine_shrink;
    cands = product(refined_values(grid.theta, inc.theta, span_theta),
                    refined_values(grid.eta, inc.eta, span_eta));
    evaluate_all(cands, eval, p, opts.threads);
    evaluations += static_cast<long long>(cands.size());
    fold(cands, objective, accept, inc, infeasible);
    history.push_back(inc.value);
  }

  OptResult res = finish(objective, r, inc, cfg, grid, false);
  res.evaluations = evaluations;
  res.infeasible = infeasible;
  res.incumbent_history = std::move(history);
  return res;
}

OptResult maximize_fidelity_at_unit_probability(double r, const ProtocolParams& base,
                                                const GridSpec& grid, const EvalConfig& cfg,
                                                const OptOptions& opts) {
  check_grid_domain(grid, cfg);
  const Evaluator eval = make_evaluator(cfg);
  ProtocolParams p = base;
  p.r = r;
  p.theta = grid.theta.lo;
  p.eta = 0.0;
  validate_params(p, cfg.limits);

  const double tol = opts.feasibility_tol;
  const double cap = input_qfi(p);
  const Accept accept = [tol, cap](const MetricsRow& row) {
    return row.physical(tol, cap) && std::abs(row.probability - 1.0) < 1e-9;
  };
  const auto with_eta = [r](const std::vector<double>& thetas) {
    std::vector<Candidate> out;
    out.reserve(thetas.size());
    for (double th : thetas) out.push_back({th, eta_opt_probability(r, th), std::nullopt});
    return out;
  };

  Incumbent inc;
  long long evaluations = 0;
  long long infeasible = 0;
  std::vector<double> history;

  std::vector<Candidate> cands = with_eta(axis_values(grid.theta));
  evaluate_all(cands, eval, p, opts.threads);
  evaluations += static_cast<long long>(cands.size());
  fold(cands, Objective::fidelity, accept, inc, infeasible);
  if (!inc.set) throw ConstraintInfeasible("no grid point satisfies |P - 1| < 1e-9");
  history.push_back(inc.value);

  double span = grid.theta.hi - grid.theta.lo;
  for (int it = 0; it < grid.refine_iters; ++it) {
    span *= grid.refine_shrink;
    cands = with_eta(refined_values(grid.theta, inc.theta, span));
    evaluate_all(cands, eval, p, opts.threads);
    evaluations += static_cast<long long>(cands.size());
    fold(cands, Objective::fidelity, accept, inc, infeasible);
    history.push_back(inc.value);
  }

  OptResult res = finish(Objective::fidelity, r, inc, cfg, grid, true);
  res.evaluations = evaluations;
  res.infeasible = infeasible;
  res.incumbent_history = std::move(history);
  return res;
}

namespace {

MetricsRow dn_row(const ProtocolParams& p, const EvalConfig& cfg) {
  if (cfg.engine == Engine::dense) {
    DenseOptions d = cfg.dense;
    d.wide_theta = cfg.limits.wide_theta;
    return do_nothing_baseline(p, d);
  }
  return do_nothing_structured(p, cfg.limits);
}

}  // namespace

ParetoScan pareto_scan(double r, const ProtocolParams& base, const GridSpec& grid,
                       const EvalConfig& cfg, const OptOptions& opts) {
  check_grid_domain(grid, cfg);
  const Evaluator eval = make_evaluator(cfg);
  ProtocolParams p = base;
  p.r = r;
  p.theta = grid.theta.lo;
  p.eta = grid.eta.lo;
  validate_params(p, cfg.limits);

  std::vector<Candidate> cands = product(axis_values(grid.theta), axis_values(grid.eta));
  evaluate_all(cands, eval, p, opts.threads);

  ParetoScan scan;
  scan.r = r;
  scan.points.reserve(cands.size());
  for (const auto& c : cands) {
    if (!c.row) continue;
    scan.points.push_back({c.theta, c.eta, c.row->fidelity, c.row->probability,
                           c.row->physical(opts.feasibility_tol, input_qfi(p))});
  }
  scan.dn_fidelity = dn_row(p, cfg).fidelity;
  return scan;
}

std::vector<SweepRow> sweep_r(SweepMode mode, const std::vector<double>& r_grid,
                              const ProtocolParams& base, const GridSpec& grid,
                              const EvalConfig& cfg, const OptOptions& opts) {
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    if (!std::isfinite(r) || r < 0.0 || r > 1.0) throw DomainError("r", "sweep values must lie in [0, 1]");
    if (i > 0 && !(r > r_grid[i - 1])) throw DomainError("r", "sweep values must be strictly increasing");
  }
  std::vector<SweepRow> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    SweepRow row;
    switch (mode) {
      case SweepMode::qfi: row.opt = maximize_metric(Objective::qfi, r, base, grid, cfg, opts); break;
      case SweepMode::fidelity:
        row.opt = maximize_metric(Objective::fidelity, r, base, grid, cfg, opts);
        break;
      case SweepMode::probability:
        row.opt = maximize_metric(Objective::probability, r, base, grid, cfg, opts);
        break;
      case SweepMode::unit_probability:
        row.opt = maximize_fidelity_at_unit_probability(r, base, grid, cfg, opts);
        break;
    }
    ProtocolParams p = base;
    p.r = r;
    p.theta = row.opt.theta_star;
    p.eta = row.opt.eta_star;
    row.dn = dn_row(p, cfg);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace qffcr
