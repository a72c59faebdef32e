#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qffcr/optimizer.hpp"
#include "qffcr/report.hpp"

namespace qffcr {

struct FigureOptions {
  int n_qubits = 10;
  int steps = 181;
  int refine_iters = 3;
  double r = 0.5;  // figure 5 only
  Engine engine = Engine::structured;
  Convention convention = Convention::paper;
  int threads = 1;
};

struct FigureData {
  report::Table table;
  std::vector<std::string> notes;
};

const std::vector<std::string>& figure_ids();

// Abscissa used by every r-swept figure: 0, 0.05, ..., 0.95, then 0.999.
std::vector<double> figure_r_grid();

// Gamma values of the generalized-GHZ figures (6a, 6b).
std::vector<double> figure_gammas();

// Throws DomainError("id", ...) for unknown ids.
FigureData make_figure(std::string_view id, const FigureOptions& opts);

}  // namespace qffcr
