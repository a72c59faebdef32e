#include "qffcr/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qffcr {

std::string_view to_string(Convention c) {
  return c == Convention::physical ? "physical" : "paper";
}

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::dense: return "dense";
    case Engine::structured: return "structured";
    case Engine::closedform_appendix: return "closedform_appendix";
    case Engine::closedform_verbatim: return "closedform_verbatim";
  }
  return "unknown";
}

std::optional<Convention> parse_convention(std::string_view s) {
  if (s == "physical") return Convention::physical;
  if (s == "paper") return Convention::paper;
  return std::nullopt;
}

std::optional<Engine> parse_engine(std::string_view s) {
  for (Engine e : {Engine::dense, Engine::structured, Engine::closedform_appendix,
                   Engine::closedform_verbatim}) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void reject(const std::string& field, double value, const std::string& range) {
  std::ostringstream os;
  os.precision(17);
  os << "value " << value << " outside legal range " << range;
  throw DomainError(field, os.str());
}

}  // namespace

ProtocolParams validate_params(const ProtocolParams& p, const ParamLimits& limits) {
  if (p.n_qubits < 1 || p.n_qubits > limits.max_qubits) {
    throw DomainError("n_qubits", "value " + std::to_string(p.n_qubits) +
                                      " outside legal range [1, " +
                                      std::to_string(limits.max_qubits) + "]");
  }
  if (!std::isfinite(p.gamma) || !(p.gamma > 0.0 && p.gamma < kPi)) {
    reject("gamma", p.gamma, "(0, pi)");
  }
  if (!std::isfinite(p.phi0)) reject("phi0", p.phi0, "finite reals");
  const double theta_hi = limits.wide_theta ? kPi : kPi / 2;
  if (!std::isfinite(p.theta) || p.theta < 0.0 || p.theta > theta_hi + kThetaSlack) {
    reject("theta", p.theta, limits.wide_theta ? "[0, pi]" : "[0, pi/2]");
  }
  if (!std::isfinite(p.eta) || p.eta < 0.0 || p.eta >= 2 * kPi) {
    reject("eta", p.eta, "[0, 2pi)");
  }
  if (!std::isfinite(p.r) || p.r < 0.0 || p.r > 1.0) reject("r", p.r, "[0, 1]");

  const double norm = std::norm(p.alpha()) + std::norm(p.beta());
  if (std::abs(norm - 1.0) > 1e-12) {
    throw DomainError("gamma", "amplitudes not normalized");
  }
  return p;
}

std::uint64_t binomial_u64(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw DomainError("k", "binomial index out of range");
  const BigCount c = binomial(n, k);
  if (c > BigCount(std::numeric_limits<std::uint64_t>::max())) {
    throw std::overflow_error("C(" + std::to_string(n) + "," + std::to_string(k) +
                              ") exceeds 64 bits");
  }
  return c.convert_to<std::uint64_t>();
}

BigCount binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw DomainError("k", "binomial index out of range");
  k = std::min(k, n - k);
  BigCount c = 1;
  for (int i = 1; i <= k; ++i) {
    c *= (n - k + i);
    c /= i;  // exact: c holds C(n-k+i, i)
  }
  return c;
}

std::vector<BranchClass> branch_classes(int n) {
  if (n < 1) throw DomainError("n_qubits", "need at least one qubit");
  std::vector<BranchClass> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  BigCount c = 1;
  for (int k = 0; k <= n; ++k) {
    out.push_back({k, c});
    c *= (n - k);
    c /= (k + 1);
  }
  return out;
}

bool MetricsRow::physical(double tol, double qfi_cap) const {
  if (!std::isfinite(probability) || !std::isfinite(fidelity) || !std::isfinite(qfi)) return false;
  return probability >= -tol && probability <= 1.0 + tol && fidelity >= -tol &&
         fidelity <= 1.0 + tol && qfi >= -tol && qfi <= qfi_cap * (1.0 + tol);
}

}  // namespace qffcr
