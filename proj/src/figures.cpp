#include "qffcr/figures.hpp"

#include <algorithm>

namespace qffcr {

namespace {

const char* kComparisonNote =
    "comparison-scheme (MWMPPF) columns omitted: that scheme is not implemented here";

GridSpec figure_grid(const FigureOptions& o, bool wide) {
  GridSpec g = wide ? GridSpec::wide() : GridSpec{};
  g.theta.steps = o.steps;
  g.eta.steps = o.steps;
  g.refine_iters = o.refine_iters;
  return g;
}

EvalConfig figure_eval(const FigureOptions& o, bool wide) {
  EvalConfig cfg;
  cfg.engine = o.engine;
  cfg.convention = o.convention;
  cfg.limits.wide_theta = wide;
  return cfg;
}

ProtocolParams base_params(const FigureOptions& o, double gamma = kPi / 2) {
  ProtocolParams p;
  p.n_qubits = o.n_qubits;
  p.gamma = gamma;
  return p;
}

std::vector<SweepRow> sweep(SweepMode mode, const FigureOptions& o, bool wide, double gamma = kPi / 2) {
  OptOptions opts;
  opts.threads = o.threads;
  return sweep_r(mode, figure_r_grid(), base_params(o, gamma), figure_grid(o, wide),
                 figure_eval(o, wide), opts);
}

std::string gamma_label(double g) {
  for (int d : {6, 4, 3, 2}) {
    if (std::abs(g - kPi / d) < 1e-12) return "pi_" + std::to_string(d);
  }
  return report::format_double(g);
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"2a", "2b", "2c", "3a", "3b", "4a", "4b", "5", "6a", "6b"};
  return ids;
}

std::vector<double> figure_r_grid() {
  std::vector<double> r;
  for (int i = 0; i <= 19; ++i) r.push_back(i / 20.0);
  r.push_back(0.999);
  return r;
}

std::vector<double> figure_gammas() { return {kPi / 6, kPi / 4, kPi / 3, kPi / 2}; }

FigureData make_figure(std::string_view id, const FigureOptions& o) {
  FigureData out;
  const std::string theta_note = "theta grid [0, pi/2]";
  const std::string wide_note = "theta grid [0, pi]";

  if (id == "2a" || id == "2b" || id == "2c") {
    const auto rows = sweep(SweepMode::qfi, o, false);
    if (id == "2a") {
      out.table.columns = {"r", "qfi_mqffcr", "qfi_dn"};
      for (const auto& s : rows) out.table.add({s.opt.r, s.opt.value, s.dn.qfi});
      out.notes.push_back(kComparisonNote);
    } else if (id == "2b") {
      out.table.columns = {"r", "theta_opt", "eta_opt", "on_boundary"};
      for (const auto& s : rows) out.table.add({s.opt.r, s.opt.theta_star, s.opt.eta_star, s.opt.on_boundary});
    } else {
      out.table.columns = {"r", "probability", "fidelity"};
      for (const auto& s : rows) {
        out.table.add({s.opt.r, s.opt.companion.probability, s.opt.companion.fidelity});
      }
    }
    out.notes.push_back(theta_note);
    return out;
  }

  if (id == "3a" || id == "3b") {
    const auto rows = sweep(SweepMode::fidelity, o, true);
    if (id == "3a") {
      out.table.columns = {"r", "fidelity_mqffcr", "fidelity_dn"};
      for (const auto& s : rows) out.table.add({s.opt.r, s.opt.value, s.dn.fidelity});
      out.notes.push_back(kComparisonNote);
    } else {
      out.table.columns = {"r", "theta_opt", "eta_opt", "probability", "on_boundary"};
      for (const auto& s : rows) {
        out.table.add({s.opt.r, s.opt.theta_star, s.opt.eta_star, s.opt.companion.probability,
                       s.opt.on_boundary});
      }
    }
    out.notes.push_back(wide_note);
    return out;
  }

  if (id == "4a" || id == "4b") {
    const auto prob = sweep(SweepMode::probability, o, true);
    const auto unit = sweep(SweepMode::unit_probability, o, true);
    if (id == "4a") {
      out.table.columns = {"r", "probability", "fidelity"};
      for (std::size_t i = 0; i < prob.size(); ++i) {
        out.table.add({prob[i].opt.r, prob[i].opt.value, unit[i].opt.value});
      }
      out.notes.push_back("fidelity column: best fidelity among unit-probability points (eta = 0)");
    } else {
      out.table.columns = {"r", "theta_opt", "eta_opt", "eta_opt_max_probability"};
      for (std::size_t i = 0; i < prob.size(); ++i) {
        out.table.add({unit[i].opt.r, unit[i].opt.theta_star, unit[i].opt.eta_star, prob[i].opt.eta_star});
      }
    }
    out.notes.push_back(wide_note);
    return out;
  }

  if (id == "5") {
    GridSpec g = GridSpec::wide();
    g.theta.steps = o.steps;
    g.eta = {0.0, kPi, o.steps, false};
    g.refine_iters = 0;
    OptOptions opts;
    opts.threads = o.threads;
    const ParetoScan scan = pareto_scan(o.r, base_params(o), g, figure_eval(o, true), opts);
    out.table = report::pareto_table(scan);
    out.notes.push_back("theta and eta grids [0, pi]");
    return out;
  }

  if (id == "6a" || id == "6b") {
    const bool qfi = id == "6a";
    const auto gammas = figure_gammas();
    out.table.columns = {"r"};
    std::vector<std::vector<SweepRow>> curves;
    for (double g : gammas) {
      out.table.columns.push_back((qfi ? "qfi_gamma_" : "fidelity_gamma_") + gamma_label(g));
      curves.push_back(qfi ? sweep(SweepMode::qfi, o, false, g) : sweep(SweepMode::unit_probability, o, true, g));
    }
    const auto rs = figure_r_grid();
    for (std::size_t i = 0; i < rs.size(); ++i) {
      std::vector<report::Cell> row{rs[i]};
      for (const auto& c : curves) row.emplace_back(c[i].opt.value);
      out.table.add(std::move(row));
    }
    out.notes.push_back(qfi ? theta_note : wide_note + "; unit-probability constraint");
    return out;
  }

  throw DomainError("id", "unknown figure id '" + std::string(id) + "'");
}

}  // namespace qffcr
