#include "qffcr/closed_form.hpp"

#include <algorithm>
#include <stdexcept>

#include "qffcr/scaled_complex.hpp"

namespace qffcr {

namespace {

struct Trig {
  double c2;  // cos^2(theta/2)
  double s2;  // sin^2(theta/2)
  double sin_theta;
  cplx u;     // e^{i eta}
  cplx ubar;  // e^{-i eta}
};

Trig trig(const ProtocolParams& p) {
  const double c = std::cos(p.theta / 2);
  const double s = std::sin(p.theta / 2);
  return {c * c, s * s, std::sin(p.theta), std::polar(1.0, p.eta), std::polar(1.0, -p.eta)};
}

ScaledComplex spow(cplx z, std::uint64_t n) { return ScaledComplex(z).pow(n); }

ScaledComplex prob_verbatim(const ProtocolParams& p, const Trig& t) {
  const cplx bracket = (p.r * t.u + (1.0 - p.r) * t.ubar) * t.s2 + t.u * t.c2;
  return spow(bracket, static_cast<std::uint64_t>(p.n_qubits));
}

}  // namespace

cplx ipow(cplx z, std::uint64_t n) { return spow(z, n).value(); }

cplx prob_total(const ProtocolParams& p, FormulaVariant v, const ParamLimits& limits) {
  validate_params(p, limits);
  if (v == FormulaVariant::appendix_aggregated) {
    return aggregate_totals(p, Convention::paper, FidelityReading::class_weighted, limits).probability;
  }
  return prob_verbatim(p, trig(p)).value();
}

cplx fid_total(const ProtocolParams& p, FormulaVariant v, const ParamLimits& limits) {
  validate_params(p, limits);
  if (v == FormulaVariant::appendix_aggregated) {
    return aggregate_totals(p, Convention::paper, FidelityReading::class_weighted, limits).fidelity;
  }
  const Trig t = trig(p);
  const auto n = static_cast<std::uint64_t>(p.n_qubits);
  const double a2 = std::norm(p.alpha());
  const double b2 = std::norm(p.beta());
  const double ab2 = a2 * b2;

  const ScaledComplex first =
      ScaledComplex(a2 * a2 + b2 * b2) * spow(t.c2 * t.u + t.s2 * t.ubar * (1.0 - p.r), n);
  const ScaledComplex second = ScaledComplex(2.0 * ab2) * spow(p.r * t.u * t.s2, n);
  const ScaledComplex third = ScaledComplex(2.0 * ab2) * ScaledComplex(2.0).pow(n) *
                              ScaledComplex(std::sqrt(1.0 - p.r) * t.sin_theta / 2.0).pow(n);
  const ScaledComplex ptot = prob_verbatim(p, t);
  if (ptot.abs() < 1e-14) throw NumericDegeneracy("total post-selection probability vanishes");
  return ((first + second + third) / ptot).value();
}

cplx qfi_total(const ProtocolParams& p, FormulaVariant v, const ParamLimits& limits) {
  validate_params(p, limits);
  if (v == FormulaVariant::appendix_aggregated) {
    return aggregate_totals(p, Convention::paper, FidelityReading::class_weighted, limits).qfi;
  }
  const Trig t = trig(p);
  const int n = p.n_qubits;
  const auto un = static_cast<std::uint64_t>(n);
  const double a2 = std::norm(p.alpha());
  const double b2 = std::norm(p.beta());
  const double q = 1.0 - p.r;

  const ScaledComplex num = ScaledComplex(4.0 * a2 * b2 * n * n) * spow(q, un) *
                            spow(t.sin_theta * t.sin_theta / 4.0, un);
  if (num.is_zero()) return {0.0, 0.0};

  const auto term = [&](const ScaledComplex& denom) {
    if (denom.is_zero()) {
      throw NumericDegeneracy("vanishing denominator in the printed QFI sum");
    }
    return num / denom;
  };
  const ScaledComplex rq_n = spow(p.r * q, un);
  const ScaledComplex e_n = spow(t.u, un);
  ScaledComplex total = term(ScaledComplex(a2) * spow(t.s2, un) * rq_n +
                             ScaledComplex(b2) * spow(t.c2, un) * e_n);
  total += term(ScaledComplex(a2) * spow(t.c2, un) * e_n +
                ScaledComplex(b2) * spow(t.s2, un) * rq_n);
  for (int k = 1; k < n; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    const auto rest = static_cast<std::uint64_t>(n - k);
    const cplx phase_a = std::polar(1.0, (2.0 * k - n) * p.eta);
    const ScaledComplex da = ScaledComplex(a2) * spow(t.c2, uk) * spow(t.s2, rest) * spow(q, rest) *
                             ScaledComplex(phase_a);
    const ScaledComplex db = ScaledComplex(b2) * spow(t.s2, uk) * spow(q, uk) *
                             ScaledComplex(std::conj(phase_a)) * spow(t.c2, rest);
    total += ScaledComplex::from_count(binomial(n, k)) * term(da + db);
  }
  return total.value();
}

cplx class_probability(const ProtocolParams& p, int k, const ParamLimits& limits) {
  validate_params(p, limits);
  const int n = p.n_qubits;
  if (k < 0 || k > n) throw DomainError("k", "class index outside [0, n_qubits]");
  const Trig t = trig(p);
  const cplx kept = t.c2 * t.u;
  const cplx damped = t.s2 * (p.r * t.u + (1.0 - p.r) * t.ubar);
  const auto uk = static_cast<std::uint64_t>(k);
  const auto rest = static_cast<std::uint64_t>(n - k);
  const ScaledComplex pa = ScaledComplex(std::norm(p.alpha())) * spow(kept, uk) * spow(damped, rest);
  const ScaledComplex pb = ScaledComplex(std::norm(p.beta())) * spow(damped, uk) * spow(kept, rest);
  return (pa + pb).value();
}

double eta_opt_probability(double r, double theta) {
  if (!std::isfinite(r) || r < 0.0 || r > 1.0) throw DomainError("r", "outside [0, 1]");
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi) {
    throw DomainError("theta", "outside [0, pi]");
  }
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const double a = c * c + r * s * s;
  const double b = (1.0 - r) * s * s;
  // 1 - 4ab written as (a - b)^2, exact because a + b = 1.
  const double root_disc = std::abs(a - b);
  cplx root;
  if (a == 0.0) {
    root = b;
  } else if (a >= b) {
    root = (1.0 + root_disc) / (2.0 * a);
  } else {
    // Smaller root via the product of roots b/a; avoids cancellation for tiny a.
    root = 2.0 * b / (1.0 + root_disc);
  }
  const cplx eta = cplx{0.0, -1.0} * std::log(root);
  if (std::abs(eta) >= 1e-12) {
    throw std::logic_error("optimal rotation angle did not reduce to zero");
  }
  return eta.real();
}

double verbatim_qfi_gap(int n) {
  if (n < 1) throw DomainError("n_qubits", "need at least one qubit");
  return static_cast<double>(n) * n * std::ldexp(1.0, 1 - n);
}

MetricsRow closed_form_metrics(const ProtocolParams& p, FormulaVariant v, const ParamLimits& limits) {
  const Realized rp = realize(prob_total(p, v, limits));
  const Realized rf = realize(fid_total(p, v, limits));
  const Realized rq = realize(qfi_total(p, v, limits));
  MetricsRow row;
  row.r = p.r;
  row.theta = p.theta;
  row.eta = p.eta;
  row.probability = rp.value;
  row.fidelity = rf.value;
  row.qfi = rq.value;
  row.imag_residual = std::max({rp.imag_residual, rf.imag_residual, rq.imag_residual});
  row.convention = Convention::paper;
  row.engine = v == FormulaVariant::verbatim ? Engine::closedform_verbatim : Engine::closedform_appendix;
  return row;
}

}  // namespace qffcr
