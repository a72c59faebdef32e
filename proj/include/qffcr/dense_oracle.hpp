#pragma once

// Ground-truth simulation of the five protocol steps on full 2^N x 2^N
// density matrices. Exponential in N; meant for N <= 6 and for validating the
// structured engine, not for sweeps.
//
// Qubit q of an N-qubit register is bit (N-1-q) of a basis index, so qubit 0
// is the most significant bit and the leftmost character of a pattern string.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qffcr/core_types.hpp"
#include "qffcr/primitives.hpp"

namespace qffcr {

struct DenseState {
  int n = 0;
  Eigen::MatrixXcd rho;

  Eigen::Index dim() const { return rho.rows(); }
  cplx trace() const { return rho.trace(); }
  bool is_hermitian(double tol = 1e-12) const;
};

// Joint measurement record, one outcome per qubit.
class BranchPattern {
 public:
  BranchPattern(int n, std::uint64_t bits);
  // "0110": character q is the outcome of qubit q.
  static BranchPattern parse(std::string_view s);
  // k zeros on the leading qubits, ones after: the structured engine's representative.
  static BranchPattern leading_zeros(int n, int k);

  int n() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  Outcome outcome(int qubit) const;
  int zeros() const;
  std::string str() const;

 private:
  int n_;
  std::uint64_t bits_;  // bit (n-1-q) holds qubit q's outcome
};

struct BranchRun {
  BranchPattern pattern;
  DenseState unnormalized_state;
  cplx probability;  // trace; real in physical convention
  Convention convention;
};

struct DenseAverage {
  std::vector<BranchRun> branches;  // ascending pattern value
  cplx probability_total;
  cplx fidelity_total;
  cplx qfi_total;
  MetricsRow metrics;
};

// Limits for dense evaluation. max_qubits guards the 4^N memory footprint.
struct DenseOptions {
  int max_qubits = kDenseMaxQubits;
  bool wide_theta = false;
  double qfi_step = 2e-4;
};

Eigen::VectorXcd ghz_vector(int n, double gamma, double phi0, int max_qubits = kDenseMaxQubits);
DenseState ghz_state(int n, double gamma, double phi0, int max_qubits = kDenseMaxQubits);

// Local operator on one qubit, from the left (K rho) or the right (rho K).
void apply_left(Eigen::MatrixXcd& rho, int n, int qubit, const Op2& k);
void apply_right(Eigen::MatrixXcd& rho, int n, int qubit, const Op2& k);
void apply_local_adc(Eigen::MatrixXcd& rho, int n, int qubit, double r);

BranchRun run_protocol_branch(const ProtocolParams& p, const BranchPattern& pattern,
                              Convention conv, const DenseOptions& opts = {});

DenseAverage run_protocol_average(const ProtocolParams& p, Convention conv,
                                  const DenseOptions& opts = {});

// QFI from the eigendecomposition form
//   F = sum_{i,j: l_i + l_j > 1e-10} 2 |<i| d rho |j>|^2 / (l_i + l_j)
// with d rho from a five-point central difference of state_at around phi.
double qfi_general(const std::function<DenseState(double)>& state_at, double phi,
                   double step = 2e-4);

// Normalized branch state as a function of the per-qubit phase x; the input's
// relative phase is N*x, so x = phi0/N reproduces the branch itself.
std::function<DenseState(double)> branch_phase_family(const ProtocolParams& p,
                                                      const BranchPattern& pattern,
                                                      Convention conv,
                                                      const DenseOptions& opts = {});

// <psi|rho|psi>, real part clipped into [0, 1].
double fidelity_pure(const Eigen::VectorXcd& psi, const DenseState& rho);
// <psi|rho|psi> without clipping; complex for paper-convention states.
cplx overlap(const Eigen::VectorXcd& psi, const DenseState& rho);

// Input state through the damping channel only. Falls back to the structured
// closed expressions when N exceeds the dense limit.
MetricsRow do_nothing_baseline(const ProtocolParams& p, const DenseOptions& opts = {});

// Relabel qubits: qubit q of the input becomes qubit perm[q] of the output.
DenseState permute_qubits(const DenseState& s, const std::vector<int>& perm);

}  // namespace qffcr
