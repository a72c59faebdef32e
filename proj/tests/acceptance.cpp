// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qffcr/closed_form.hpp"
#include "qffcr/dense_oracle.hpp"
#include "qffcr/optimizer.hpp"
#include "qffcr/structured.hpp"
#include "qffcr/validation.hpp"

using namespace qffcr;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ProtocolParams ghz(int n) {
  ProtocolParams p;
  p.n_qubits = n;
  return p;
}

int hw_threads() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

std::vector<double> r_steps(double from, double to, double step) {
  std::vector<double> rs;
  const auto count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) rs.push_back(std::min(to, from + i * step));
  return rs;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  ProtocolParams params(int n) {
    ProtocolParams p;
    p.n_qubits = n;
    p.gamma = 0.1 + (kPi - 0.2) * u();
    p.phi0 = 2 * kPi * u();
    p.theta = (kPi / 2) * u();
    p.eta = 2 * kPi * u();
    p.r = u();
    return p;
  }

 private:
  double u() { return dist_(gen_); }
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

// Structured layout (outcome-0 qubits first) onto the pattern's layout.
std::vector<int> layout_of(const BranchPattern& pat) {
  std::vector<int> zeros;
  std::vector<int> ones;
  for (int q = 0; q < pat.n(); ++q) (pat.outcome(q) == Outcome::zero ? zeros : ones).push_back(q);
  zeros.insert(zeros.end(), ones.begin(), ones.end());
  return zeros;
}

double row_gap(const MetricsRow& a, const MetricsRow& b) {
  return std::max({std::abs(a.probability - b.probability), std::abs(a.fidelity - b.fidelity),
                   std::abs(a.qfi - b.qfi) / std::max(1.0, std::abs(b.qfi))});
}

Verdict c1_identity() {
  double worst = 0.0;
  auto see = [&](const MetricsRow& m, int n) {
    worst = std::max({worst, std::abs(m.probability - 1.0), std::abs(m.fidelity - 1.0),
                      std::abs(m.qfi - static_cast<double>(n) * n)});
  };
  see(aggregate_metrics(ghz(10), Convention::paper), 10);
  see(closed_form_metrics(ghz(10), FormulaVariant::appendix_aggregated), 10);
  for (int n = 1; n <= 4; ++n) see(run_protocol_average(ghz(n), Convention::paper).metrics, n);
  return {worst <= 1e-9, "max_error=" + fmt("%.3g", worst) + " tol=1e-9"};
}

Verdict c2_cross_engine() {
  Rng rng(20240611);
  double state_err = 0.0;
  double agg_err = 0.0;
  int skipped = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int i = 0; i < 20; ++i) {
      const ProtocolParams p = rng.params(n);
      for (Convention c : {Convention::paper, Convention::physical}) {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
          const BranchPattern pat(n, bits);
          const DenseState exported =
              permute_qubits(state_export(branch_elements(p, pat.zeros(), c)), layout_of(pat));
          const BranchRun run = run_protocol_branch(p, pat, c);
          state_err = std::max(state_err, (exported.rho - run.unnormalized_state.rho).cwiseAbs().maxCoeff());
        }
        try {
          agg_err = std::max(agg_err, row_gap(run_protocol_average(p, c).metrics, aggregate_metrics(p, c)));
        } catch (const NumericDegeneracy&) {
          ++skipped;
        }
      }
    }
  }
  return {state_err <= 1e-10 && agg_err <= 1e-9,
          "state_error=" + fmt("%.3g", state_err) + " (tol 1e-10) aggregate_error=" + fmt("%.3g", agg_err) +
              " (tol 1e-9) degenerate_skipped=" + std::to_string(skipped)};
}

Verdict c3_closed_form() {
  double trace_err = 0.0;
  for (int n = 1; n <= 12; ++n) {
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        for (int l = 0; l < 5; ++l) {
          ProtocolParams p = ghz(n);
          p.theta = (kPi / 2) * i / 9;
          p.eta = 2 * kPi * j / 10;
          p.r = l / 4.0;
          const cplx verb = prob_total(p, FormulaVariant::verbatim);
          const cplx tr = aggregate_totals(p, Convention::paper).probability;
          trace_err = std::max(trace_err, std::abs(verb - tr));
        }
      }
    }
  }
  const double verb_qfi = qfi_total(ghz(10), FormulaVariant::verbatim).real();
  const double app_qfi = qfi_total(ghz(10), FormulaVariant::appendix_aggregated).real();
  const bool pass = trace_err <= 1e-9 && std::abs(verb_qfi - 100.1953125) <= 1e-9 && std::abs(app_qfi - 100.0) <= 1e-9;
  return {pass, "trace_error=" + fmt("%.3g", trace_err) + " verbatim_qfi=" + fmt("%.12f", verb_qfi) +
                    " appendix_qfi=" + fmt("%.12f", app_qfi)};
}

Verdict c4_qfi_formula() {
  Rng rng(77);
  double worst = 0.0;
  int compared = 0;
  for (int i = 0; i < 30; ++i) {
    const int n = 1 + i % 3;
    const ProtocolParams p = rng.params(n);
    for (int k = 0; k <= n; ++k) {
      const BranchElements e = branch_elements(p, k, Convention::physical);
      const double prob = e.P.value().real();
      if (prob < 1e-12) continue;
      const double formula = branch_qfi(e, n).real();
      const double sld =
          qfi_general(branch_phase_family(p, BranchPattern::leading_zeros(n, k), Convention::physical), p.phi0 / n);
      worst = std::max(worst, std::abs(formula - sld) / std::max(std::abs(sld), 1e-12));
      ++compared;
    }
  }
  return {worst <= 1e-4, "max_rel_error=" + fmt("%.3g", worst) + " tol=1e-4 branches=" + std::to_string(compared)};
}

Verdict c5_eta_opt() {
  ParamLimits wide;
  wide.wide_theta = true;
  double eta_max = 0.0;
  double p_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double r = i / 99.0;
      const double th = std::min(kPi, kPi * j / 99.0);
      eta_max = std::max(eta_max, std::abs(eta_opt_probability(r, th)));
      ProtocolParams p = ghz(10);
      p.r = r;
      p.theta = th;
      p.eta = 0.0;
      p_err = std::max(p_err, std::abs(aggregate_totals(p, Convention::paper, FidelityReading::class_weighted, wide)
                                           .probability -
                                       1.0));
    }
  }
  return {eta_max <= 1e-12 && p_err <= 1e-12,
          "max|eta_opt|=" + fmt("%.3g", eta_max) + " max|P-1|=" + fmt("%.3g", p_err) + " tol=1e-12"};
}

EvalConfig paper_cfg(bool wide) {
  EvalConfig cfg;
  cfg.engine = Engine::structured;
  cfg.convention = Convention::paper;
  cfg.limits.wide_theta = wide;
  return cfg;
}

OptOptions threaded() {
  OptOptions o;
  o.threads = hw_threads();
  return o;
}

// Shared by criteria 6 and 10: max-QFI sweep, default narrow grid.
const std::vector<SweepRow>& qfi_sweep() {
  static const std::vector<SweepRow> rows =
      sweep_r(SweepMode::qfi, r_steps(0.0, 0.9, 0.05), ghz(10), GridSpec{}, paper_cfg(false), threaded());
  return rows;
}

Verdict c6_qfi_plateau() {
  std::ostringstream bad;
  bool pass = true;
  double at09 = 0.0;
  for (const SweepRow& row : qfi_sweep()) {
    const double r = row.opt.r;
    if (r <= 0.8 + 1e-12 && row.opt.value < 95.0) {
      pass = false;
      bad << " r=" << fmt("%.2f", r) << ":" << fmt("%.4g", row.opt.value);
    }
    if (std::abs(r - 0.9) < 1e-12) at09 = row.opt.value;
  }
  if (!(at09 < 15.0)) pass = false;
  std::string detail = "qfi(r=0.9)=" + fmt("%.4g", at09) + " (need < 15)";
  if (!bad.str().empty()) detail += "; below 95 at" + bad.str();
  return {pass, detail};
}

Verdict c7_max_fidelity() {
  std::vector<double> rs = r_steps(0.0, 0.7, 0.05);
  rs.push_back(0.999);
  const auto rows = sweep_r(SweepMode::fidelity, rs, ghz(10), GridSpec::wide(), paper_cfg(true), threaded());
  bool pass = true;
  double worst_low = 1.0;
  double last = 0.0;
  for (const SweepRow& row : rows) {
    if (row.opt.r <= 0.7 + 1e-12) {
      worst_low = std::min(worst_low, row.opt.value);
      if (row.opt.value < 0.98) pass = false;
    } else {
      last = row.opt.value;
      if (std::abs(last - 0.5) > 0.02) pass = false;
    }
  }
  return {pass, "min_fidelity(r<=0.7)=" + fmt("%.5f", worst_low) + " (need >= 0.98) fidelity(r=0.999)=" +
                    fmt("%.5f", last) + " (need 0.5 +- 0.02)"};
}

Verdict c8_unit_probability() {
  std::vector<double> low = {0.0, 0.05, 0.10, 0.15};
  std::vector<double> high = r_steps(0.3, 1.0, 0.05);
  std::vector<double> rs = low;
  rs.insert(rs.end(), high.begin(), high.end());
  const auto rows =
      sweep_r(SweepMode::unit_probability, rs, ghz(10), GridSpec::wide(), paper_cfg(true), threaded());
  bool pass = true;
  std::ostringstream bad;
  for (const SweepRow& row : rows) {
    const double r = row.opt.r;
    const double f = row.opt.value;
    const bool ok = r <= 0.15 + 1e-12 ? f > 0.5 : std::abs(f - 0.5) <= 0.02;
    if (!ok) {
      pass = false;
      bad << " r=" << fmt("%.2f", r) << ":" << fmt("%.6f", f);
    }
  }
  return {pass, pass ? "all r within bounds" : "out of bounds at" + bad.str()};
}

Verdict c9_generalized() {
  ProtocolParams p = ghz(10);
  p.gamma = kPi / 3;
  const auto rows = sweep_r(SweepMode::unit_probability, r_steps(0.0, 0.9, 0.05), p, GridSpec::wide(),
                            paper_cfg(true), threaded());
  double worst = 1.0;
  double worst_r = 0.0;
  for (const SweepRow& row : rows) {
    if (row.opt.value < worst) {
      worst = row.opt.value;
      worst_r = row.opt.r;
    }
  }
  return {worst >= 0.99, "min_fidelity=" + fmt("%.5f", worst) + " at r=" + fmt("%.2f", worst_r) + " (need >= 0.99)"};
}

Verdict c10_fidelity_at_max_qfi() {
  bool pass = true;
  std::ostringstream bad;
  for (const SweepRow& row : qfi_sweep()) {
    const double r = row.opt.r;
    if (r < 0.2 - 1e-12 || r > 0.8 + 1e-12) continue;
    const double f = row.opt.companion.fidelity;
    if (std::abs(f - 0.5) > 0.05) {
      pass = false;
      bad << " r=" << fmt("%.2f", r) << ":" << fmt("%.4f", f);
    }
  }
  return {pass, pass ? "all within 0.5 +- 0.05" : "out of band at" + bad.str()};
}

Verdict c11_performance() {
  // Away from eta = 0 the paper-convention total probability decays like
  // |c^2 e^{i eta} + s^2 e^{-i eta}|^N and the point is rejected as degenerate.
  ProtocolParams p = ghz(1000);
  p.theta = 0.9;
  p.eta = 0.0;
  p.r = 0.3;
  const auto t0 = Clock::now();
  const MetricsRow m = aggregate_metrics(p, Convention::paper);
  const double big = seconds_since(t0);
  const auto t1 = Clock::now();
  const ValidationReport rep = run_validation(1);
  const double val = seconds_since(t1);
  const bool pass = big < 1.0 && val < 120.0 && std::isfinite(m.qfi);
  return {pass, "N=1000 aggregate " + fmt("%.4f", big) + " s (< 1 s); validate " + fmt("%.2f", val) + " s (< 120 s), " +
                    std::to_string(std::count_if(rep.checks.begin(), rep.checks.end(),
                                                 [](const CheckResult& c) { return c.pass; })) +
                    "/" + std::to_string(rep.checks.size()) + " checks passed"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no runtime bound
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "identity-limit", 1.0, c1_identity},
      {2, "cross-engine-equality", 10.0, c2_cross_engine},
      {3, "closed-form-reconciliation", 0.0, c3_closed_form},
      {4, "branch-qfi-vs-sld", 30.0, c4_qfi_formula},
      {5, "optimal-rotation-is-zero", 0.0, c5_eta_opt},
      {6, "max-qfi-plateau", 120.0, c6_qfi_plateau},
      {7, "max-fidelity", 0.0, c7_max_fidelity},
      {8, "unit-probability-fidelity", 0.0, c8_unit_probability},
      {9, "generalized-ghz-unit-probability", 0.0, c9_generalized},
      {10, "fidelity-at-max-qfi", 0.0, c10_fidelity_at_max_qfi},
      {11, "performance", 0.0, c11_performance},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Verdict out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      out.pass = false;
      out.detail += "; runtime over " + fmt("%.0f", c.budget_s) + " s";
    }
    if (!out.pass) ++failed;
    std::printf("%s %2d %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
