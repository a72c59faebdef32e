#pragma once

// Branch-class evaluation in O(N) per class.
//
// The GHZ input is a sum of four product operators (|0><0|, |1><1|, |0><1|,
// |1><0| on every qubit) and every protocol step is local, so each term stays
// a product. A class is fixed by k, the number of qubits that saw outcome 0;
// qubits 0..k-1 take role "A" (outcome 0) and the rest role "B".

#include <array>
#include <vector>

#include "qffcr/core_types.hpp"
#include "qffcr/dense_oracle.hpp"
#include "qffcr/primitives.hpp"
#include "qffcr/scaled_complex.hpp"

namespace qffcr {

struct DiagFactorRun {
  cplx d0;
  cplx d1;
  int count = 0;
};

// overall * (x) over qubits of diag(d0_q, d1_q), stored as runs of equal pairs.
struct DiagProduct {
  ScaledComplex overall;
  std::vector<DiagFactorRun> runs;

  int size() const;
  const DiagFactorRun& factor(int qubit) const;
  ScaledComplex trace() const;
  // Diagonal entry at basis index (qubit q is bit size()-1-q); size() <= 64.
  ScaledComplex entry(std::uint64_t index) const;
  // Entry on |o...o>.
  ScaledComplex corner(Outcome o) const;
};

struct BranchElements {
  int n = 0;
  int k = 0;
  Convention convention = Convention::paper;
  ScaledComplex A;  // <0..0|rho|0..0>
  ScaledComplex B;  // <1..1|rho|1..1>
  ScaledComplex C;  // <1..1|rho|0..0>
  ScaledComplex D;  // <0..0|rho|1..1>
  ScaledComplex P;  // trace
  DiagProduct diag_alpha;
  DiagProduct diag_beta;
};

// Images of |0><0|, |0><1|, |1><0|, |1><1| under one qubit's five steps.
struct RoleMap {
  Op2 from00;
  Op2 from01;
  Op2 from10;
  Op2 from11;
};
RoleMap role_map(Outcome role, double theta, double eta, double r, Convention conv);

BranchElements branch_elements(const ProtocolParams& p, int k, Convention conv,
                               const ParamLimits& limits = {});

// 4|C|^2 n^2 / (P (A + B)): QFI of the normalized branch.
cplx branch_qfi(const BranchElements& e, int n);

// Fidelity denominators. class_weighted weights each class by its own probability;
// p0_literal divides every class fidelity by the k=0 probability first.
enum class FidelityReading { class_weighted, p0_literal };

struct AggregateTotals {
  cplx probability;
  cplx fidelity;
  cplx qfi;
};

AggregateTotals aggregate_totals(const ProtocolParams& p, Convention conv,
                                 FidelityReading reading = FidelityReading::class_weighted,
                                 const ParamLimits& limits = {});

MetricsRow aggregate_metrics(const ProtocolParams& p, Convention conv,
                             FidelityReading reading = FidelityReading::class_weighted,
                             const ParamLimits& limits = {});

DenseState state_export(const BranchElements& e, int max_qubits = kDenseMaxQubits);

// Damping only, any N:
//   F = |a|^4 + |a|^2|b|^2 r^N + |b|^4 (1-r)^N + 2|ab|^2 (1-r)^{N/2}
//   QFI = 4|ab|^2 (1-r)^N N^2 / (|a|^2 + |b|^2 r^N + |b|^2 (1-r)^N)
MetricsRow do_nothing_structured(const ProtocolParams& p, const ParamLimits& limits = {});

// (real part, |imag part|)
struct Realized {
  double value;
  double imag_residual;
};
Realized realize(cplx z);

}  // namespace qffcr
