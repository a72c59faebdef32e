#pragma once

#include <functional>

#include "qffcr/core_types.hpp"
#include "qffcr/dense_oracle.hpp"
#include "qffcr/structured.hpp"

namespace qffcr {

struct EvalConfig {
  Engine engine = Engine::structured;
  Convention convention = Convention::paper;
  FidelityReading reading = FidelityReading::class_weighted;
  ParamLimits limits{};
  DenseOptions dense{};
};

using Evaluator = std::function<MetricsRow(const ProtocolParams&)>;

// Closed-form engines exist only in paper convention; asking for physical is
// a DomainError on "convention".
Evaluator make_evaluator(const EvalConfig& cfg);

}  // namespace qffcr
