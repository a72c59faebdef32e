#pragma once

// Printed aggregate formulas for probability, fidelity and QFI, evaluated
// as-is, next to the same quantities summed from the per-class elements.

#include <cstdint>

#include "qffcr/core_types.hpp"
#include "qffcr/structured.hpp"

namespace qffcr {

enum class FormulaVariant { verbatim, appendix_aggregated };

// z^n by repeated squaring, with a binary exponent carried so that n in the
// thousands neither underflows nor overflows mid-way.
cplx ipow(cplx z, std::uint64_t n);

// ((r e^{i eta} + (1-r) e^{-i eta}) sin^2(theta/2) + e^{i eta} cos^2(theta/2))^N
cplx prob_total(const ProtocolParams& p, FormulaVariant v, const ParamLimits& limits = {});
cplx fid_total(const ProtocolParams& p, FormulaVariant v, const ParamLimits& limits = {});
cplx qfi_total(const ProtocolParams& p, FormulaVariant v, const ParamLimits& limits = {});

// Probability of one record with k outcome-0 qubits.
cplx class_probability(const ProtocolParams& p, int k, const ParamLimits& limits = {});

// Rotation angle maximizing the total probability: -i log of the "+" root of
// a x^2 - x + b = 0 with a = cos^2(theta/2) + r sin^2(theta/2) and
// b = (1-r) sin^2(theta/2). Throws std::logic_error if the result is not 0.
double eta_opt_probability(double r, double theta);

// Verbatim minus aggregated QFI at r=0, eta=0, theta=pi/2: N^2 2^{1-N}.
double verbatim_qfi_gap(int n);

// Metrics row from either variant (paper convention only).
MetricsRow closed_form_metrics(const ProtocolParams& p, FormulaVariant v,
                               const ParamLimits& limits = {});

}  // namespace qffcr
