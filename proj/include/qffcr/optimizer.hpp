#pragma once

// Grid search with shrinking refinement over (theta, eta).

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qffcr/core_types.hpp"
#include "qffcr/evaluator.hpp"

namespace qffcr {

enum class Objective { qfi, fidelity, probability };

std::string_view to_string(Objective o);
std::optional<Objective> parse_objective(std::string_view s);
double metric_of(const MetricsRow& row, Objective o);

class ConstraintInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// steps points on [lo, hi]; a half-open axis is periodic with period hi - lo
// and never samples hi itself.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;
  bool half_open = false;

  double at(int i) const;
  double spacing() const;
};

struct GridSpec {
  Axis theta{0.0, kPi / 2, 181, false};
  Axis eta{0.0, 2 * kPi, 181, true};
  int refine_iters = 3;
  double refine_shrink = 0.2;

  void validate() const;
  long long evaluation_count() const;
  // Same grid with theta over [0, pi].
  static GridSpec wide();
};

struct OptResult {
  double r = 0.0;
  Objective objective = Objective::qfi;
  double theta_star = 0.0;
  double eta_star = 0.0;
  double value = 0.0;
  MetricsRow companion;
  Engine engine = Engine::structured;
  Convention convention = Convention::paper;
  bool on_boundary = false;
  long long evaluations = 0;
  long long infeasible = 0;
  std::vector<double> incumbent_history;  // value after the full grid and after each refinement
};

struct OptOptions {
  int threads = 1;
  double feasibility_tol = 1e-9;
};

OptResult maximize_metric(Objective objective, double r, const ProtocolParams& base,
                          const GridSpec& grid, const EvalConfig& cfg, const OptOptions& opts = {});

// eta pinned to the probability-optimal rotation (zero), theta swept alone;
// points with |P - 1| >= 1e-9 are rejected.
OptResult maximize_fidelity_at_unit_probability(double r, const ProtocolParams& base,
                                                const GridSpec& grid, const EvalConfig& cfg,
                                                const OptOptions& opts = {});

struct ParetoPoint {
  double theta;
  double eta;
  double fidelity;
  double probability;
  bool physical;
};

struct ParetoScan {
  double r;
  std::vector<ParetoPoint> points;  // grid order, theta major
  double dn_fidelity;
};

// Single pass over grid (no refinement). Points whose evaluation throws are dropped.
ParetoScan pareto_scan(double r, const ProtocolParams& base, const GridSpec& grid,
                       const EvalConfig& cfg, const OptOptions& opts = {});

enum class SweepMode { qfi, fidelity, probability, unit_probability };
std::string_view to_string(SweepMode m);

struct SweepRow {
  OptResult opt;
  MetricsRow dn;
};

std::vector<SweepRow> sweep_r(SweepMode mode, const std::vector<double>& r_grid,
                              const ProtocolParams& base, const GridSpec& grid,
                              const EvalConfig& cfg, const OptOptions& opts = {});

}  // namespace qffcr
