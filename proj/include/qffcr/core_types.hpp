#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qffcr {

using cplx = std::complex<double>;
using BigCount = boost::multiprecision::cpp_int;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kStructuredMaxQubits = 10000;
inline constexpr int kDenseMaxQubits = 6;
// Slack on theta's upper bound, so decimal renderings of pi/2 and pi are accepted.
inline constexpr double kThetaSlack = 1e-9;

// Parameter outside its legal range. field() names the offending parameter.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string field, const std::string& what)
      : std::domain_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Register too large for the requested representation.
class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Post-selection or branch denominators vanish.
class NumericDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Convention { physical, paper };
enum class Engine { dense, structured, closedform_appendix, closedform_verbatim };
enum class Outcome : std::uint8_t { zero = 0, one = 1 };

std::string_view to_string(Convention c);
std::string_view to_string(Engine e);
std::optional<Convention> parse_convention(std::string_view s);
std::optional<Engine> parse_engine(std::string_view s);

// One protocol instance: register size, input state (gamma, phi0), and the
// three control knobs (measurement strength theta, rotation eta, damping r).
struct ProtocolParams {
  int n_qubits = 1;
  double gamma = kPi / 2;
  double phi0 = 0.0;
  double theta = kPi / 2;
  double eta = 0.0;
  double r = 0.0;

  // alpha = cos(gamma/2), beta = e^{i phi0} sin(gamma/2)
  cplx alpha() const { return {std::cos(gamma / 2), 0.0}; }
  cplx beta() const { return std::polar(std::sin(gamma / 2), phi0); }

  bool operator==(const ProtocolParams&) const = default;
};

struct ParamLimits {
  int max_qubits = kStructuredMaxQubits;
  // Admit theta in [0, pi] instead of [0, pi/2].
  bool wide_theta = false;
};

ProtocolParams validate_params(const ProtocolParams& p, const ParamLimits& limits = {});

// Measurement-record equivalence class: k qubits saw outcome 0.
struct BranchClass {
  int k = 0;
  BigCount multiplicity;
};

// Exact C(n, k); throws std::overflow_error when it does not fit 64 bits.
std::uint64_t binomial_u64(int n, int k);
BigCount binomial(int n, int k);
std::vector<BranchClass> branch_classes(int n);

// One evaluated parameter point. Values are realized (real part) from the
// possibly complex paper-convention aggregates; imag_residual keeps the
// largest discarded imaginary magnitude.
struct MetricsRow {
  double r = 0.0;
  double theta = 0.0;
  double eta = 0.0;
  double probability = 0.0;
  double fidelity = 0.0;
  double qfi = 0.0;
  double imag_residual = 0.0;
  Convention convention = Convention::paper;
  Engine engine = Engine::structured;

  // probability, fidelity in [0, 1 + tol], qfi in [-tol, qfi_cap * (1 + tol)], all finite.
  // qfi_cap: the input state's QFI, an upper bound for any physical output.
  bool physical(double tol = 1e-9, double qfi_cap = std::numeric_limits<double>::infinity()) const;
};

}  // namespace qffcr
