#include "qffcr/primitives.hpp"

#include <algorithm>
#include <cmath>

namespace qffcr {

double Op2::distance(const Op2& other) const {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(m[i] - other.m[i]));
  return d;
}

Op2 operator*(const Op2& a, const Op2& b) {
  return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
           a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
}

Op2 operator+(const Op2& a, const Op2& b) {
  return {{a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]}};
}

Op2 operator*(cplx s, const Op2& a) {
  return {{s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}};
}

namespace {

void check_unit_interval(double r) {
  if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
    throw DomainError("r", "value " + std::to_string(r) + " outside legal range [0, 1]");
  }
}

}  // namespace

Op2 weak_meas_op(Outcome outcome, double theta) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi + kThetaSlack) {
    throw DomainError("theta", "value " + std::to_string(theta) + " outside legal range [0, pi]");
  }
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return outcome == Outcome::zero ? Op2::diag(c, s) : Op2::diag(s, c);
}

Op2 flip_op(Outcome outcome) {
  if (outcome == Outcome::zero) return Op2::identity();
  return {{cplx{0}, cplx{1}, cplx{1}, cplx{0}}};
}

std::pair<Op2, Op2> adc_kraus(double r) {
  check_unit_interval(r);
  Op2 e1;
  e1(0, 1) = std::sqrt(r);
  return {Op2::diag(1.0, std::sqrt(1.0 - r)), e1};
}

Op2 rotation_op(Outcome outcome, double eta) {
  const cplx plus = std::polar(1.0, eta / 2);
  const cplx minus = std::polar(1.0, -eta / 2);
  return outcome == Outcome::zero ? Op2::diag(plus, minus) : Op2::diag(minus, plus);
}

AdcAction adc_basis_action(double r) {
  check_unit_interval(r);
  const double q = std::sqrt(1.0 - r);
  AdcAction a;
  a.ket0bra0 = Op2::basis(0, 0);
  a.ket1bra1 = Op2::diag(r, 1.0 - r);
  a.ket1bra0 = q * Op2::basis(1, 0);
  a.ket0bra1 = q * Op2::basis(0, 1);
  return a;
}

double decay_probability(double rate, double time) {
  if (!(rate >= 0.0) || !(time >= 0.0)) {
    throw DomainError("rate", "decay rate and time must be non-negative");
  }
  return std::exp(-rate * time);
}

Op2 conjugate(const Op2& k, const Op2& rho) { return k * rho * k.adjoint(); }

Op2 sandwich(const Op2& k, const Op2& rho) { return k * rho * k; }

Op2 apply_adc(const Op2& rho, double r) {
  const auto [e0, e1] = adc_kraus(r);
  return conjugate(e0, rho) + conjugate(e1, rho);
}

Op2 apply_rotation(const Op2& t, const Op2& rho, Convention conv) {
  return conv == Convention::physical ? conjugate(t, rho) : sandwich(t, rho);
}

}  // namespace qffcr
