#include "qffcr/dense_oracle.hpp"

#include <algorithm>

#include "qffcr/structured.hpp"

namespace qffcr {

bool DenseState::is_hermitian(double tol) const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

BranchPattern::BranchPattern(int n, std::uint64_t bits) : n_(n), bits_(bits) {
  if (n < 1 || n > 64) throw DimensionError("pattern length must be in [1, 64]");
  if (n < 64 && (bits >> n) != 0) throw DomainError("pattern", "bits beyond pattern length");
}

BranchPattern BranchPattern::parse(std::string_view s) {
  if (s.empty() || s.size() > 64) throw DomainError("pattern", "length must be in [1, 64]");
  std::uint64_t bits = 0;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw DomainError("pattern", "only '0' and '1' allowed");
    bits = (bits << 1U) | static_cast<std::uint64_t>(ch == '1');
  }
  return {static_cast<int>(s.size()), bits};
}

BranchPattern BranchPattern::leading_zeros(int n, int k) {
  if (k < 0 || k > n) throw DomainError("k", "class index outside [0, n_qubits]");
  const int ones = n - k;
  const std::uint64_t bits = ones == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << ones) - 1;
  return {n, bits};
}

Outcome BranchPattern::outcome(int qubit) const {
  return ((bits_ >> (n_ - 1 - qubit)) & 1U) ? Outcome::one : Outcome::zero;
}

int BranchPattern::zeros() const {
  int z = 0;
  for (int q = 0; q < n_; ++q) z += outcome(q) == Outcome::zero;
  return z;
}

std::string BranchPattern::str() const {
  std::string s;
  for (int q = 0; q < n_; ++q) s += outcome(q) == Outcome::zero ? '0' : '1';
  return s;
}

namespace {

void check_dense(int n, int max_qubits) {
  if (n > max_qubits) {
    throw DimensionError("2^" + std::to_string(n) + " exceeds the dense limit of 2^" +
                         std::to_string(max_qubits));
  }
}

ProtocolParams validate_dense(const ProtocolParams& p, const DenseOptions& opts) {
  check_dense(p.n_qubits, opts.max_qubits);
  return validate_params(p, {kStructuredMaxQubits, opts.wide_theta});
}

}  // namespace

Eigen::VectorXcd ghz_vector(int n, double gamma, double phi0, int max_qubits) {
  check_dense(n, max_qubits);
  ProtocolParams p;
  p.n_qubits = n;
  p.gamma = gamma;
  p.phi0 = phi0;
  validate_params(p);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(0) = p.alpha();
  v(dim - 1) += p.beta();
  return v;
}

DenseState ghz_state(int n, double gamma, double phi0, int max_qubits) {
  const Eigen::VectorXcd v = ghz_vector(n, gamma, phi0, max_qubits);
  return {n, v * v.adjoint()};
}

void apply_left(Eigen::MatrixXcd& rho, int n, int qubit, const Op2& k) {
  const Eigen::Index mask = Eigen::Index{1} << (n - 1 - qubit);
  const Eigen::Index dim = rho.rows();
  for (Eigen::Index i0 = 0; i0 < dim; ++i0) {
    if (i0 & mask) continue;
    const Eigen::Index i1 = i0 | mask;
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      const cplx a = rho(i0, c);
      const cplx b = rho(i1, c);
      rho(i0, c) = k(0, 0) * a + k(0, 1) * b;
      rho(i1, c) = k(1, 0) * a + k(1, 1) * b;
    }
  }
}

void apply_right(Eigen::MatrixXcd& rho, int n, int qubit, const Op2& k) {
  const Eigen::Index mask = Eigen::Index{1} << (n - 1 - qubit);
  const Eigen::Index dim = rho.cols();
  for (Eigen::Index j0 = 0; j0 < dim; ++j0) {
    if (j0 & mask) continue;
    const Eigen::Index j1 = j0 | mask;
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      const cplx a = rho(r, j0);
      const cplx b = rho(r, j1);
      rho(r, j0) = a * k(0, 0) + b * k(1, 0);
      rho(r, j1) = a * k(0, 1) + b * k(1, 1);
    }
  }
}

void apply_local_adc(Eigen::MatrixXcd& rho, int n, int qubit, double r) {
  const auto [e0, e1] = adc_kraus(r);
  Eigen::MatrixXcd other = rho;
  apply_left(rho, n, qubit, e0);
  apply_right(rho, n, qubit, e0.adjoint());
  apply_left(other, n, qubit, e1);
  apply_right(other, n, qubit, e1.adjoint());
  rho += other;
}

namespace {

void conjugate_all(Eigen::MatrixXcd& rho, int n, const std::vector<Op2>& ops) {
  for (int q = 0; q < n; ++q) {
    apply_left(rho, n, q, ops[static_cast<std::size_t>(q)]);
    apply_right(rho, n, q, ops[static_cast<std::size_t>(q)].adjoint());
  }
}

DenseState run_branch_raw(const ProtocolParams& p, const BranchPattern& pattern, Convention conv) {
  const int n = p.n_qubits;
  std::vector<Op2> meas, flips, rots;
  for (int q = 0; q < n; ++q) {
    const Outcome o = pattern.outcome(q);
    meas.push_back(weak_meas_op(o, p.theta));
    flips.push_back(flip_op(o));
    rots.push_back(rotation_op(o, p.eta));
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) = p.alpha();
  psi(dim - 1) += p.beta();
  Eigen::MatrixXcd rho = psi * psi.adjoint();

  conjugate_all(rho, n, meas);
  conjugate_all(rho, n, flips);
  for (int q = 0; q < n; ++q) apply_local_adc(rho, n, q, p.r);
  conjugate_all(rho, n, flips);
  for (int q = 0; q < n; ++q) {
    const Op2& t = rots[static_cast<std::size_t>(q)];
    apply_left(rho, n, q, t);
    apply_right(rho, n, q, conv == Convention::physical ? t.adjoint() : t);
  }
  return {n, std::move(rho)};
}

}  // namespace

BranchRun run_protocol_branch(const ProtocolParams& p, const BranchPattern& pattern,
                              Convention conv, const DenseOptions& opts) {
  validate_dense(p, opts);
  if (pattern.n() != p.n_qubits) throw DimensionError("pattern length differs from n_qubits");
  DenseState s = run_branch_raw(p, pattern, conv);
  const cplx prob = s.trace();
  return {pattern, std::move(s), prob, conv};
}

std::function<DenseState(double)> branch_phase_family(const ProtocolParams& p,
                                                      const BranchPattern& pattern,
                                                      Convention conv, const DenseOptions& opts) {
  validate_dense(p, opts);
  return [p, pattern, conv](double x) {
    ProtocolParams shifted = p;
    shifted.phi0 = p.n_qubits * x;
    DenseState s = run_branch_raw(shifted, pattern, conv);
    const cplx tr = s.trace();
    if (std::abs(tr) < 1e-300) throw NumericDegeneracy("branch probability vanishes");
    s.rho /= tr;
    return s;
  };
}

double qfi_general(const std::function<DenseState(double)>& state_at, double phi, double step) {
  if (!(step >= 1e-7 && step <= 1e-3)) {
    throw DomainError("step", "finite-difference step outside [1e-7, 1e-3]");
  }
  const DenseState s0 = state_at(phi);
  const Eigen::MatrixXcd d =
      (-state_at(phi + 2 * step).rho + 8.0 * state_at(phi + step).rho -
       8.0 * state_at(phi - step).rho + state_at(phi - 2 * step).rho) /
      (12.0 * step);

  const Eigen::MatrixXcd herm = 0.5 * (s0.rho + s0.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  if (es.info() != Eigen::Success) throw NumericDegeneracy("eigensolver did not converge");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::MatrixXcd dv = v.adjoint() * d * v;

  double f = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    for (Eigen::Index j = 0; j < lam.size(); ++j) {
      const double den = lam(i) + lam(j);
      if (den > 1e-10) f += 2.0 * std::norm(dv(i, j)) / den;
    }
  }
  return f;
}

cplx overlap(const Eigen::VectorXcd& psi, const DenseState& rho) {
  if (psi.size() != rho.dim()) throw DimensionError("state vector and matrix sizes differ");
  return psi.dot(rho.rho * psi);  // dot conjugates the left operand
}

double fidelity_pure(const Eigen::VectorXcd& psi, const DenseState& rho) {
  return std::clamp(overlap(psi, rho).real(), 0.0, 1.0);
}

DenseAverage run_protocol_average(const ProtocolParams& p, Convention conv,
                                  const DenseOptions& opts) {
  validate_dense(p, opts);
  const int n = p.n_qubits;
  const std::uint64_t count = std::uint64_t{1} << n;
  const Eigen::VectorXcd psi = ghz_vector(n, p.gamma, p.phi0, opts.max_qubits);
  const double nn = static_cast<double>(n) * n;

  DenseAverage out;
  out.branches.reserve(count);
  cplx ptot{0.0, 0.0}, fnum{0.0, 0.0}, qfi{0.0, 0.0};
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    BranchRun run = run_protocol_branch(p, BranchPattern(n, bits), conv, opts);
    ptot += run.probability;
    fnum += overlap(psi, run.unnormalized_state);
    if (std::abs(run.probability) >= 1e-14) {
      if (conv == Convention::physical) {
        const auto family = branch_phase_family(p, run.pattern, conv, opts);
        qfi += run.probability.real() * qfi_general(family, p.phi0 / n, opts.qfi_step);
      } else {
        // SLD form is undefined for the non-Hermitian paper-convention
        // states; read the corner block instead.
        const Eigen::MatrixXcd& m = run.unnormalized_state.rho;
        const Eigen::Index last = m.rows() - 1;
        const cplx ab = m(0, 0) + m(last, last);
        if (std::norm(m(last, 0)) > 0.0) {
          if (std::abs(ab) < 1e-14) throw NumericDegeneracy("branch denominator A+B vanishes");
          qfi += 4.0 * nn * std::norm(m(last, 0)) / ab;
        }
      }
    }
    out.branches.push_back(std::move(run));
  }
  if (std::abs(ptot) < 1e-14) throw NumericDegeneracy("total post-selection probability vanishes");

  out.probability_total = ptot;
  out.fidelity_total = fnum / ptot;
  out.qfi_total = qfi;

  const Realized rp = realize(out.probability_total);
  const Realized rf = realize(out.fidelity_total);
  const Realized rq = realize(out.qfi_total);
  MetricsRow& row = out.metrics;
  row.r = p.r;
  row.theta = p.theta;
  row.eta = p.eta;
  row.probability = rp.value;
  row.fidelity = rf.value;
  row.qfi = rq.value;
  row.imag_residual = std::max({rp.imag_residual, rf.imag_residual, rq.imag_residual});
  row.convention = conv;
  row.engine = Engine::dense;
  return out;
}

MetricsRow do_nothing_baseline(const ProtocolParams& p, const DenseOptions& opts) {
  if (p.n_qubits > opts.max_qubits) {
    return do_nothing_structured(p, {kStructuredMaxQubits, opts.wide_theta});
  }
  validate_dense(p, opts);
  const int n = p.n_qubits;
  const auto damped = [p, n](double x) {
    ProtocolParams shifted = p;
    shifted.phi0 = n * x;
    const Eigen::VectorXcd psi = ghz_vector(n, shifted.gamma, shifted.phi0, n);
    Eigen::MatrixXcd rho = psi * psi.adjoint();
    for (int q = 0; q < n; ++q) apply_local_adc(rho, n, q, p.r);
    return DenseState{n, std::move(rho)};
  };
  const DenseState out = damped(p.phi0 / n);
  const Eigen::VectorXcd psi = ghz_vector(n, p.gamma, p.phi0, n);

  MetricsRow row;
  row.r = p.r;
  row.theta = p.theta;
  row.eta = p.eta;
  row.probability = out.trace().real();
  row.fidelity = fidelity_pure(psi, out);
  row.qfi = qfi_general(damped, p.phi0 / n, opts.qfi_step);
  row.convention = Convention::physical;
  row.engine = Engine::dense;
  return row;
}

DenseState permute_qubits(const DenseState& s, const std::vector<int>& perm) {
  const int n = s.n;
  if (static_cast<int>(perm.size()) != n) throw DimensionError("permutation length differs from n");
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int t : perm) {
    if (t < 0 || t >= n || used[static_cast<std::size_t>(t)]) {
      throw DomainError("perm", "not a permutation of 0..n-1");
    }
    used[static_cast<std::size_t>(t)] = true;
  }
  const Eigen::Index dim = s.dim();
  const auto map = [&](Eigen::Index idx) {
    Eigen::Index out = 0;
    for (int q = 0; q < n; ++q) {
      if ((idx >> (n - 1 - q)) & 1) out |= Eigen::Index{1} << (n - 1 - perm[static_cast<std::size_t>(q)]);
    }
    return out;
  };
  DenseState o{n, Eigen::MatrixXcd::Zero(dim, dim)};
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) o.rho(map(i), map(j)) = s.rho(i, j);
  }
  return o;
}

}  // namespace qffcr
