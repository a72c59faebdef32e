#pragma once

// Single-qubit operators of the feed-forward-and-reversal protocol.
//
// Everything here is a 2x2 value; lifting to N qubits is the caller's job.
// Basis order is |0>, |1>, matrices are row-major.

#include <array>
#include <utility>

#include "qffcr/core_types.hpp"

namespace qffcr {

struct Op2 {
  std::array<cplx, 4> m{};

  cplx operator()(int row, int col) const { return m[static_cast<std::size_t>(2 * row + col)]; }
  cplx& operator()(int row, int col) { return m[static_cast<std::size_t>(2 * row + col)]; }

  static Op2 identity() { return {{cplx{1}, cplx{0}, cplx{0}, cplx{1}}}; }
  static Op2 zero() { return {}; }
  static Op2 diag(cplx d0, cplx d1) { return {{d0, cplx{0}, cplx{0}, d1}}; }
  // |row><col|
  static Op2 basis(int row, int col) {
    Op2 out;
    out(row, col) = 1.0;
    return out;
  }

  Op2 adjoint() const { return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}}; }
  cplx trace() const { return m[0] + m[3]; }

  // Largest entrywise modulus of (*this - other).
  double distance(const Op2& other) const;

  friend Op2 operator*(const Op2& a, const Op2& b);
  friend Op2 operator+(const Op2& a, const Op2& b);
  friend Op2 operator*(cplx s, const Op2& a);
};

// Weak measurement along z (strength theta; pi/2 = no measurement, 0 = projective).
// outcome 0: diag(cos(theta/2), sin(theta/2)); outcome 1: diag(sin, cos).
Op2 weak_meas_op(Outcome outcome, double theta);

// Offsetting operation: identity for outcome 0, Pauli-X for outcome 1.
Op2 flip_op(Outcome outcome);

// Amplitude-damping Kraus pair (e0, e1) with decay probability r.
std::pair<Op2, Op2> adc_kraus(double r);

// Correction rotation: outcome 0 diag(e^{i eta/2}, e^{-i eta/2}), outcome 1 its adjoint.
Op2 rotation_op(Outcome outcome, double eta);

// Images of the four basis operators under the damping channel.
struct AdcAction {
  Op2 ket0bra0;
  Op2 ket1bra1;
  Op2 ket1bra0;
  Op2 ket0bra1;
};
AdcAction adc_basis_action(double r);

// r = exp(-rate * time), exactly as the protocol's noise model states it.
double decay_probability(double rate, double time);

// k rho k^dagger
Op2 conjugate(const Op2& k, const Op2& rho);
// k rho k (rotation as written in the appendix algebra)
Op2 sandwich(const Op2& k, const Op2& rho);
// e0 rho e0^dagger + e1 rho e1^dagger
Op2 apply_adc(const Op2& rho, double r);
// Rotation step under the given convention.
Op2 apply_rotation(const Op2& t, const Op2& rho, Convention conv);

}  // namespace qffcr
