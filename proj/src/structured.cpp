#include "qffcr/structured.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qffcr {

int DiagProduct::size() const {
  int n = 0;
  for (const auto& run : runs) n += run.count;
  return n;
}

const DiagFactorRun& DiagProduct::factor(int qubit) const {
  int seen = 0;
  for (const auto& run : runs) {
    seen += run.count;
    if (qubit < seen) return run;
  }
  throw std::out_of_range("qubit index " + std::to_string(qubit) + " beyond product size");
}

ScaledComplex DiagProduct::trace() const {
  ScaledComplex t = overall;
  for (const auto& run : runs) t *= ScaledComplex(run.d0 + run.d1).pow(static_cast<std::uint64_t>(run.count));
  return t;
}

ScaledComplex DiagProduct::entry(std::uint64_t index) const {
  const int n = size();
  if (n > 64) throw DimensionError("diagonal entry lookup needs at most 64 qubits");
  ScaledComplex v = overall;
  int q = 0;
  for (const auto& run : runs) {
    for (int i = 0; i < run.count; ++i, ++q) {
      const bool one = (index >> (n - 1 - q)) & 1U;
      v *= one ? run.d1 : run.d0;
    }
  }
  return v;
}

ScaledComplex DiagProduct::corner(Outcome o) const {
  ScaledComplex v = overall;
  for (const auto& run : runs) {
    v *= ScaledComplex(o == Outcome::zero ? run.d0 : run.d1).pow(static_cast<std::uint64_t>(run.count));
  }
  return v;
}

namespace {

Op2 propagate(Op2 x, Outcome role, double theta, double eta, double r, Convention conv) {
  const Op2 m = weak_meas_op(role, theta);
  const Op2 f = flip_op(role);
  x = conjugate(m, x);
  x = conjugate(f, x);
  x = apply_adc(x, r);
  x = conjugate(f, x);
  return apply_rotation(rotation_op(role, eta), x, conv);
}

void expect_structure(const RoleMap& m) {
  const auto zero = [](cplx z) { return z == cplx{0.0, 0.0}; };
  const bool ok = zero(m.from00(0, 1)) && zero(m.from00(1, 0)) && zero(m.from11(0, 1)) &&
                  zero(m.from11(1, 0)) && zero(m.from01(0, 0)) && zero(m.from01(1, 0)) &&
                  zero(m.from01(1, 1)) && zero(m.from10(0, 0)) && zero(m.from10(0, 1)) &&
                  zero(m.from10(1, 1));
  if (!ok) throw std::logic_error("per-qubit map left the diagonal/corner structure");
}

DiagProduct diag_product(cplx weight, const Op2& a, int k, const Op2& b, int n) {
  DiagProduct d;
  d.overall = ScaledComplex(weight);
  if (k > 0) d.runs.push_back({a(0, 0), a(1, 1), k});
  if (n - k > 0) d.runs.push_back({b(0, 0), b(1, 1), n - k});
  return d;
}

// Neumaier summation of scaled terms, aligned to the largest exponent.
class ScaledSum {
 public:
  void add(const ScaledComplex& t) {
    if (!t.is_zero()) terms_.push_back(t);
  }
  ScaledComplex total() const {
    if (terms_.empty()) return {};
    std::int64_t top = terms_.front().exponent();
    for (const auto& t : terms_) top = std::max(top, t.exponent());
    double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
    for (const auto& t : terms_) {
      const cplx v = (t / ScaledComplex::from_parts(1.0, top)).value();
      neumaier(sr, cr, v.real());
      neumaier(si, ci, v.imag());
    }
    return ScaledComplex::from_parts(cplx{sr + cr, si + ci}, top);
  }

 private:
  static void neumaier(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  std::vector<ScaledComplex> terms_;
};

// C(n, k) as scaled weights, exact integers rounded once; cached per thread.
const std::vector<ScaledComplex>& class_weights(int n) {
  thread_local int cached_n = -1;
  thread_local std::vector<ScaledComplex> weights;
  if (cached_n != n) {
    weights.clear();
    for (const auto& cls : branch_classes(n)) weights.push_back(ScaledComplex::from_count(cls.multiplicity));
    cached_n = n;
  }
  return weights;
}

}  // namespace

RoleMap role_map(Outcome role, double theta, double eta, double r, Convention conv) {
  RoleMap m{propagate(Op2::basis(0, 0), role, theta, eta, r, conv),
            propagate(Op2::basis(0, 1), role, theta, eta, r, conv),
            propagate(Op2::basis(1, 0), role, theta, eta, r, conv),
            propagate(Op2::basis(1, 1), role, theta, eta, r, conv)};
  expect_structure(m);
  return m;
}

namespace {

// x^0 .. x^n for every scalar a role contributes.
struct RolePowers {
  std::vector<ScaledComplex> d00_0, d00_1, d11_0, d11_1, tr00, tr11, c10, c01;

  RolePowers(const RoleMap& m, int n)
      : d00_0(table(m.from00(0, 0), n)),
        d00_1(table(m.from00(1, 1), n)),
        d11_0(table(m.from11(0, 0), n)),
        d11_1(table(m.from11(1, 1), n)),
        tr00(table(m.from00.trace(), n)),
        tr11(table(m.from11.trace(), n)),
        c10(table(m.from10(1, 0), n)),
        c01(table(m.from01(0, 1), n)) {}

  static std::vector<ScaledComplex> table(cplx x, int n) {
    std::vector<ScaledComplex> t;
    t.reserve(static_cast<std::size_t>(n) + 1);
    t.emplace_back(1.0);
    const ScaledComplex base(x);
    for (int j = 1; j <= n; ++j) t.push_back(t.back() * base);
    return t;
  }
};

BranchElements build_elements(const ProtocolParams& p, int k, Convention conv, const RoleMap& a,
                              const RoleMap& b, const RolePowers& pa, const RolePowers& pb) {
  const int n = p.n_qubits;
  const auto i = static_cast<std::size_t>(k);
  const auto j = static_cast<std::size_t>(n - k);
  const ScaledComplex wa(std::norm(p.alpha()));
  const ScaledComplex wb(std::norm(p.beta()));
  BranchElements e;
  e.n = n;
  e.k = k;
  e.convention = conv;
  e.diag_alpha = diag_product(std::norm(p.alpha()), a.from00, k, b.from00, n);
  e.diag_beta = diag_product(std::norm(p.beta()), a.from11, k, b.from11, n);
  e.A = wa * pa.d00_0[i] * pb.d00_0[j] + wb * pa.d11_0[i] * pb.d11_0[j];
  e.B = wa * pa.d00_1[i] * pb.d00_1[j] + wb * pa.d11_1[i] * pb.d11_1[j];
  e.C = ScaledComplex(std::conj(p.alpha()) * p.beta()) * pa.c10[i] * pb.c10[j];
  e.D = ScaledComplex(p.alpha() * std::conj(p.beta())) * pa.c01[i] * pb.c01[j];
  e.P = wa * pa.tr00[i] * pb.tr00[j] + wb * pa.tr11[i] * pb.tr11[j];
  return e;
}

}  // namespace

BranchElements branch_elements(const ProtocolParams& p, int k, Convention conv,
                               const ParamLimits& limits) {
  validate_params(p, limits);
  if (k < 0 || k > p.n_qubits) throw DomainError("k", "class index outside [0, n_qubits]");
  const RoleMap a = role_map(Outcome::zero, p.theta, p.eta, p.r, conv);
  const RoleMap b = role_map(Outcome::one, p.theta, p.eta, p.r, conv);
  return build_elements(p, k, conv, a, b, RolePowers(a, p.n_qubits), RolePowers(b, p.n_qubits));
}

cplx branch_qfi(const BranchElements& e, int n) {
  if (e.C.is_zero()) return {0.0, 0.0};
  const ScaledComplex ab = e.A + e.B;
  if (ab.abs() < 1e-14) throw NumericDegeneracy("branch denominator A+B vanishes");
  if (e.P.is_zero()) throw NumericDegeneracy("branch probability vanishes");
  const double nn = static_cast<double>(n) * n;
  return (ScaledComplex(4.0 * nn) * e.C.norm() / (ab * e.P)).value();
}

AggregateTotals aggregate_totals(const ProtocolParams& p, Convention conv,
                                 FidelityReading reading, const ParamLimits& limits) {
  validate_params(p, limits);
  const int n = p.n_qubits;
  const cplx alpha = p.alpha();
  const cplx beta = p.beta();
  const ScaledComplex wa(std::norm(alpha));
  const ScaledComplex wb(std::norm(beta));
  const ScaledComplex wc(alpha * std::conj(beta));
  const ScaledComplex wd(std::conj(alpha) * beta);
  const ScaledComplex qfi_scale(4.0 * static_cast<double>(n) * n);

  const RoleMap ra = role_map(Outcome::zero, p.theta, p.eta, p.r, conv);
  const RoleMap rb = role_map(Outcome::one, p.theta, p.eta, p.r, conv);
  const RolePowers pa(ra, n);
  const RolePowers pb(rb, n);

  ScaledSum prob, fid, fid_literal, qfi;
  ScaledComplex p0;
  const std::vector<ScaledComplex>& weights = class_weights(n);
  for (int k = 0; k <= n; ++k) {
    const BranchElements e = build_elements(p, k, conv, ra, rb, pa, pb);
    const ScaledComplex& mult = weights[static_cast<std::size_t>(k)];
    if (k == 0) p0 = e.P;
    prob.add(mult * e.P);
    const ScaledComplex num = wa * e.A + wc * e.C + wd * e.D + wb * e.B;
    fid.add(mult * num);
    fid_literal.add(mult * e.P * num);
    if (e.C.is_zero()) continue;
    const ScaledComplex ab = e.A + e.B;
    const double ref = std::max(e.A.log_abs(), e.B.log_abs());
    if (ab.is_zero() || ab.log_abs() - ref <= std::log(1e-14)) {
      throw NumericDegeneracy("class " + std::to_string(k) + ": A+B vanishes");
    }
    qfi.add(mult * qfi_scale * e.C.norm() / ab);
  }

  const ScaledComplex ptot = prob.total();
  if (ptot.abs() < 1e-14) throw NumericDegeneracy("total post-selection probability vanishes");
  ScaledComplex f = fid.total() / ptot;
  if (reading == FidelityReading::p0_literal) {
    if (p0.abs() < 1e-14) throw NumericDegeneracy("P_0 vanishes under the literal 1/p_0 reading");
    f = fid_literal.total() / (p0 * ptot);
  }
  return {ptot.value(), f.value(), qfi.total().value()};
}

Realized realize(cplx z) { return {z.real(), std::abs(z.imag())}; }

MetricsRow aggregate_metrics(const ProtocolParams& p, Convention conv, FidelityReading reading,
                             const ParamLimits& limits) {
  const AggregateTotals t = aggregate_totals(p, conv, reading, limits);
  const Realized rp = realize(t.probability);
  const Realized rf = realize(t.fidelity);
  const Realized rq = realize(t.qfi);
  MetricsRow row;
  row.r = p.r;
  row.theta = p.theta;
  row.eta = p.eta;
  row.probability = rp.value;
  row.fidelity = rf.value;
  row.qfi = rq.value;
  row.imag_residual = std::max({rp.imag_residual, rf.imag_residual, rq.imag_residual});
  row.convention = conv;
  row.engine = Engine::structured;
  return row;
}

DenseState state_export(const BranchElements& e, int max_qubits) {
  if (e.n > max_qubits) {
    throw DimensionError("state export of " + std::to_string(e.n) + " qubits exceeds limit " +
                         std::to_string(max_qubits));
  }
  const Eigen::Index dim = Eigen::Index{1} << e.n;
  DenseState s;
  s.n = e.n;
  s.rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    s.rho(i, i) = (e.diag_alpha.entry(idx) + e.diag_beta.entry(idx)).value();
  }
  s.rho(dim - 1, 0) += e.C.value();
  s.rho(0, dim - 1) += e.D.value();
  return s;
}

MetricsRow do_nothing_structured(const ProtocolParams& p, const ParamLimits& limits) {
  validate_params(p, limits);
  const int n = p.n_qubits;
  const double a2 = std::norm(p.alpha());
  const double b2 = std::norm(p.beta());
  const double rn = std::pow(p.r, n);
  const double qn = std::pow(1.0 - p.r, n);
  const double qh = std::pow(1.0 - p.r, 0.5 * n);

  MetricsRow row;
  row.r = p.r;
  row.theta = p.theta;
  row.eta = p.eta;
  row.probability = 1.0;
  row.fidelity = a2 * a2 + a2 * b2 * rn + b2 * b2 * qn + 2.0 * a2 * b2 * qh;
  const double denom = a2 + b2 * rn + b2 * qn;
  row.qfi = denom > 0.0 ? 4.0 * a2 * b2 * qn * n * n / denom : 0.0;
  row.convention = Convention::physical;
  row.engine = Engine::structured;
  return row;
}

}  // namespace qffcr
