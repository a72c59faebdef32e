#pragma once

// Complex scalar with an explicit binary exponent: value = mantissa * 2^exponent.
//
// Branch-class weights for large registers are products of hundreds of
// factors below one (sin^{2N}(theta/2), (1-r)^N, ...) multiplied by binomials
// up to ~1e300. Neither side survives in a plain double; their product does.

#include <cmath>
#include <complex>
#include <cstdint>

#include "qffcr/core_types.hpp"

namespace qffcr {

class ScaledComplex {
 public:
  ScaledComplex() = default;
  ScaledComplex(cplx v) : mant_(v) { normalize(); }  // NOLINT(google-explicit-constructor)
  ScaledComplex(double v) : mant_(v, 0.0) { normalize(); }  // NOLINT(google-explicit-constructor)
  static ScaledComplex from_parts(cplx mant, std::int64_t exp2) {
    ScaledComplex s;
    s.mant_ = mant;
    s.exp_ = exp2;
    s.normalize();
    return s;
  }
  static ScaledComplex from_count(const BigCount& c);

  bool is_zero() const { return mant_ == cplx{0.0, 0.0}; }
  bool is_finite() const { return std::isfinite(mant_.real()) && std::isfinite(mant_.imag()); }
  // Canonical form: largest component of the mantissa in [0.5, 1).
  cplx mantissa() const;
  std::int64_t exponent() const;

  // Plain complex value; underflows to zero / overflows to inf outside double range.
  cplx value() const;
  double abs() const { return scale(std::abs(mant_), exp_); }
  double log_abs() const;  // natural log of |value|, -inf for zero
  ScaledComplex conj() const { return from_parts(std::conj(mant_), exp_); }
  ScaledComplex norm() const;  // |value|^2 as a real scaled number

  ScaledComplex& operator*=(const ScaledComplex& o);
  ScaledComplex& operator/=(const ScaledComplex& o);
  ScaledComplex& operator+=(const ScaledComplex& o);
  ScaledComplex& operator-=(const ScaledComplex& o) { return *this += -o; }
  ScaledComplex operator-() const { return from_parts(-mant_, exp_); }

  friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) { return a *= b; }
  friend ScaledComplex operator/(ScaledComplex a, const ScaledComplex& b) { return a /= b; }
  friend ScaledComplex operator+(ScaledComplex a, const ScaledComplex& b) { return a += b; }
  friend ScaledComplex operator-(ScaledComplex a, const ScaledComplex& b) { return a -= b; }

  ScaledComplex pow(std::uint64_t n) const;

 private:
  static double scale(double x, std::int64_t e);
  void normalize();
  // Renormalize only once the mantissa drifts far from 1.
  void rebalance();

  cplx mant_{0.0, 0.0};
  std::int64_t exp_ = 0;
};

}  // namespace qffcr
