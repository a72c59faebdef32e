#include "qffcr/evaluator.hpp"

#include "qffcr/closed_form.hpp"

namespace qffcr {

Evaluator make_evaluator(const EvalConfig& cfg) {
  switch (cfg.engine) {
    case Engine::dense: {
      DenseOptions opts = cfg.dense;
      opts.wide_theta = cfg.limits.wide_theta;
      const Convention conv = cfg.convention;
      return [opts, conv](const ProtocolParams& p) { return run_protocol_average(p, conv, opts).metrics; };
    }
    case Engine::structured:
      return [cfg](const ProtocolParams& p) {
        return aggregate_metrics(p, cfg.convention, cfg.reading, cfg.limits);
      };
    case Engine::closedform_appendix:
    case Engine::closedform_verbatim: {
      if (cfg.convention != Convention::paper) {
        throw DomainError("convention", "closed-form engines are defined for the paper convention only");
      }
      const FormulaVariant v = cfg.engine == Engine::closedform_verbatim
                                   ? FormulaVariant::verbatim
                                   : FormulaVariant::appendix_aggregated;
      const ParamLimits limits = cfg.limits;
      return [v, limits](const ProtocolParams& p) { return closed_form_metrics(p, v, limits); };
    }
  }
  throw DomainError("engine", "unknown engine");
}

}  // namespace qffcr
