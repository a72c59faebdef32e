#include "qffcr/scaled_complex.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace qffcr {

namespace {

// 2^e for normal-range e, built from the exponent bits.
double pow2(std::int64_t e) {
  if (e < -1022 || e > 1023) return std::ldexp(1.0, static_cast<int>(e));
  return std::bit_cast<double>(static_cast<std::uint64_t>(e + 1023) << 52);
}

}  // namespace

double ScaledComplex::scale(double x, std::int64_t e) {
  if (x == 0.0) return 0.0;
  if (e > 4096) return x * std::numeric_limits<double>::infinity();
  if (e < -4096) return 0.0;
  if (e >= -1022 && e <= 1023) {
    const double y = x * pow2(e);
    if (std::abs(y) >= std::numeric_limits<double>::min() || y == 0.0) return y;
  }
  return std::ldexp(x, static_cast<int>(e));
}

void ScaledComplex::normalize() {
  const double m = std::max(std::abs(mant_.real()), std::abs(mant_.imag()));
  if (m == 0.0) {
    mant_ = {0.0, 0.0};
    exp_ = 0;
    return;
  }
  if (!std::isfinite(m)) return;
  int e = 0;
  if (m >= std::numeric_limits<double>::min()) {
    e = static_cast<int>((std::bit_cast<std::uint64_t>(m) >> 52) & 0x7ffU) - 1022;
  } else {
    std::frexp(m, &e);
  }
  const double f = pow2(-e);
  mant_ = {mant_.real() * f, mant_.imag() * f};
  exp_ += e;
}

void ScaledComplex::rebalance() {
  const double m = std::max(std::abs(mant_.real()), std::abs(mant_.imag()));
  if (m == 0.0 || m > 0x1p256 || m < 0x1p-256) normalize();
}

cplx ScaledComplex::mantissa() const {
  ScaledComplex c = *this;
  c.normalize();
  return c.mant_;
}

std::int64_t ScaledComplex::exponent() const {
  ScaledComplex c = *this;
  c.normalize();
  return c.exp_;
}

ScaledComplex ScaledComplex::from_count(const BigCount& c) {
  if (c == 0) return {};
  const std::int64_t bits = static_cast<std::int64_t>(boost::multiprecision::msb(c)) + 1;
  const std::int64_t shift = std::max<std::int64_t>(0, bits - 60);
  const BigCount top = c >> static_cast<unsigned>(shift);
  return from_parts(cplx{top.convert_to<double>(), 0.0}, shift);
}

cplx ScaledComplex::value() const { return {scale(mant_.real(), exp_), scale(mant_.imag(), exp_)}; }

double ScaledComplex::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mant_)) + static_cast<double>(exp_) * std::log(2.0);
}

ScaledComplex ScaledComplex::norm() const { return from_parts(std::norm(mant_), 2 * exp_); }

ScaledComplex& ScaledComplex::operator*=(const ScaledComplex& o) {
  const double ar = mant_.real(), ai = mant_.imag();
  const double br = o.mant_.real(), bi = o.mant_.imag();
  mant_ = {ar * br - ai * bi, ar * bi + ai * br};
  exp_ += o.exp_;
  rebalance();
  return *this;
}

ScaledComplex& ScaledComplex::operator/=(const ScaledComplex& o) {
  ScaledComplex d = o;
  d.normalize();
  const double br = d.mant_.real(), bi = d.mant_.imag();
  const double den = br * br + bi * bi;
  const double ar = mant_.real(), ai = mant_.imag();
  mant_ = {(ar * br + ai * bi) / den, (ai * br - ar * bi) / den};
  exp_ -= d.exp_;
  rebalance();
  return *this;
}

ScaledComplex& ScaledComplex::operator+=(const ScaledComplex& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  normalize();
  ScaledComplex o = other;
  o.normalize();
  if (exp_ >= o.exp_) {
    const std::int64_t d = exp_ - o.exp_;
    if (d < 1100) mant_ += cplx{scale(o.mant_.real(), -d), scale(o.mant_.imag(), -d)};
  } else {
    const std::int64_t d = o.exp_ - exp_;
    cplx mine{0.0, 0.0};
    if (d < 1100) mine = {scale(mant_.real(), -d), scale(mant_.imag(), -d)};
    mant_ = o.mant_ + mine;
    exp_ = o.exp_;
  }
  normalize();
  return *this;
}

ScaledComplex ScaledComplex::pow(std::uint64_t n) const {
  ScaledComplex result(1.0);
  ScaledComplex base = *this;
  while (n > 0) {
    if (n & 1U) result *= base;
    base *= base;
    n >>= 1U;
  }
  return result;
}

}  // namespace qffcr
