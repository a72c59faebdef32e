#include <gtest/gtest.h>

#include <chrono>

#include "qffcr/dense_oracle.hpp"
#include "qffcr/structured.hpp"

using namespace qffcr;

namespace {

ProtocolParams ghz(int n) {
  ProtocolParams p;
  p.n_qubits = n;
  return p;
}

}  // namespace

TEST(BranchElements, TwoQubitNoiselessClassZero) {
  const BranchElements e = branch_elements(ghz(2), 0, Convention::paper);
  EXPECT_NEAR(e.A.value().real(), 1.0 / 8, 1e-15);
  EXPECT_NEAR(e.B.value().real(), 1.0 / 8, 1e-15);
  EXPECT_NEAR(e.C.value().real(), 1.0 / 8, 1e-15);
  EXPECT_NEAR(e.P.value().real(), 1.0 / 4, 1e-15);
}

TEST(BranchElements, FullDecayRemovesCoherence) {
  ProtocolParams p = ghz(5);
  p.r = 1.0;
  p.theta = 0.8;
  p.eta = 0.4;
  for (int k = 0; k <= 5; ++k) {
    for (Convention c : {Convention::paper, Convention::physical}) {
      const BranchElements e = branch_elements(p, k, c);
      EXPECT_TRUE(e.C.is_zero());
      EXPECT_TRUE(e.D.is_zero());
    }
  }
}

TEST(BranchElements, SingleQubitMatchesDense) {
  ProtocolParams p = ghz(1);
  p.r = 0.5;
  const BranchElements e = branch_elements(p, 1, Convention::physical);
  EXPECT_NEAR(e.A.value().real(), 3.0 / 8, 1e-15);
  EXPECT_NEAR(e.B.value().real(), 1.0 / 8, 1e-15);
  EXPECT_NEAR(e.C.value().real(), std::sqrt(0.5) / 4, 1e-15);
  EXPECT_NEAR(e.P.value().real(), 0.5, 1e-15);
}

TEST(BranchElements, CoherenceMagnitudeIsClassIndependent) {
  ProtocolParams p = ghz(9);
  p.gamma = 1.2;
  p.phi0 = 0.5;
  p.theta = 1.1;
  p.eta = 2.3;
  p.r = 0.42;
  const double expect = std::abs(std::conj(p.alpha()) * p.beta()) * std::pow(1 - p.r, 4.5) *
                        std::pow(std::sin(p.theta) / 2, 9);
  for (int k = 0; k <= 9; ++k) {
    EXPECT_NEAR(branch_elements(p, k, Convention::paper).C.abs() / expect, 1.0, 1e-12) << k;
  }
}

TEST(BranchElements, RejectsBadClass) {
  EXPECT_THROW(branch_elements(ghz(3), 4, Convention::paper), DomainError);
  EXPECT_THROW(branch_elements(ghz(3), -1, Convention::paper), DomainError);
}

TEST(StateExport, MatchesDenseForEveryPattern) {
  ProtocolParams p = ghz(4);
  p.gamma = 0.9;
  p.phi0 = 1.7;
  p.theta = 0.5;
  p.eta = 2.6;
  p.r = 0.27;
  for (Convention c : {Convention::paper, Convention::physical}) {
    for (int k = 0; k <= 4; ++k) {
      const DenseState s = state_export(branch_elements(p, k, c));
      const BranchRun d = run_protocol_branch(p, BranchPattern::leading_zeros(4, k), c);
      EXPECT_LT((s.rho - d.unnormalized_state.rho).cwiseAbs().maxCoeff(), 1e-12) << k;
    }
  }
}

TEST(StateExport, SingleQubitAndFullDecay) {
  ProtocolParams p = ghz(1);
  p.r = 0.5;
  const DenseState s = state_export(branch_elements(p, 1, Convention::physical));
  EXPECT_NEAR(s.rho(0, 1).real(), std::sqrt(0.5) / 4, 1e-15);

  p.n_qubits = 3;
  p.r = 1.0;
  const DenseState d = state_export(branch_elements(p, 2, Convention::physical));
  Eigen::MatrixXcd off = d.rho;
  off.diagonal().setZero();
  EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(state_export(branch_elements(ghz(8), 2, Convention::paper)), DimensionError);
}

TEST(BranchQfi, Examples) {
  BranchElements e;
  e.A = 0.5;
  e.B = 0.5;
  e.C = 0.5;
  e.D = 0.5;
  e.P = 1.0;
  EXPECT_NEAR(branch_qfi(e, 10).real(), 100.0, 1e-12);
  e.C = 0.0;
  EXPECT_EQ(branch_qfi(e, 10), cplx(0.0));
  e.C = 0.5;
  e.A = 0.0;
  e.B = 0.0;
  EXPECT_THROW(branch_qfi(e, 10), NumericDegeneracy);
}

TEST(BranchQfi, AgreesWithSldOnNormalizedBranches) {
  ProtocolParams p = ghz(3);
  p.gamma = 1.3;
  p.theta = 0.9;
  p.eta = 0.6;
  p.r = 0.3;
  for (int k = 0; k <= 3; ++k) {
    const BranchElements e = branch_elements(p, k, Convention::physical);
    const double formula = branch_qfi(e, 3).real();
    const double sld = qfi_general(branch_phase_family(p, BranchPattern::leading_zeros(3, k), Convention::physical),
                                   p.phi0 / 3);
    EXPECT_NEAR(formula / sld, 1.0, 1e-4) << k;
  }
}

TEST(AggregateMetrics, IdentityChannelAnyN) {
  for (int n : {1, 2, 7, 10, 40}) {
    const MetricsRow m = aggregate_metrics(ghz(n), Convention::paper);
    EXPECT_NEAR(m.probability, 1.0, 1e-12);
    EXPECT_NEAR(m.fidelity, 1.0, 1e-12);
    EXPECT_NEAR(m.qfi, static_cast<double>(n) * n, 1e-9 * n * n);
  }
}

TEST(AggregateMetrics, UnitProbabilityAtZeroRotation) {
  for (double r : {0.0, 0.3, 0.77, 1.0}) {
    for (double th : {0.0, 0.4, 1.2, kPi / 2}) {
      ProtocolParams p = ghz(10);
      p.r = r;
      p.theta = th;
      EXPECT_NEAR(aggregate_metrics(p, Convention::paper).probability, 1.0, 1e-12);
    }
  }
}

// Projective measurement keeps only the two corner branches: no coherence, no decay.
TEST(AggregateMetrics, ProjectiveMeasurementFidelity) {
  for (double r : {0.0, 0.25, 0.6, 1.0}) {
    ProtocolParams p = ghz(6);
    p.theta = 0.0;
    p.r = r;
    EXPECT_NEAR(aggregate_metrics(p, Convention::paper).fidelity, 0.5, 1e-12)
        << r;
  }
}

TEST(AggregateMetrics, PhysicalRotationInvariance) {
  ProtocolParams p = ghz(3);
  p.theta = 0.8;
  p.r = 0.4;
  const MetricsRow ref = aggregate_metrics(p, Convention::physical);
  p.eta = 2.1;
  const MetricsRow rot = aggregate_metrics(p, Convention::physical);
  EXPECT_NEAR(rot.probability, ref.probability, 1e-14);
  EXPECT_NEAR(rot.qfi, ref.qfi, 1e-12);
}

TEST(AggregateMetrics, LargeRegisterIsFast) {
  ProtocolParams p = ghz(1000);
  p.theta = 0.7;
  p.eta = 0.3;
  p.r = 0.2;
  const auto t0 = std::chrono::steady_clock::now();
  const MetricsRow m = aggregate_metrics(p, Convention::paper);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);
  EXPECT_TRUE(std::isfinite(m.probability));
  EXPECT_TRUE(std::isfinite(m.fidelity));
  EXPECT_TRUE(std::isfinite(m.qfi));
}

TEST(Realize, Examples) {
  Realized a = realize(cplx{1.0, 0.0});
  EXPECT_EQ(a.value, 1.0);
  EXPECT_EQ(a.imag_residual, 0.0);
  a = realize(cplx{0.5, 0.01});
  EXPECT_EQ(a.value, 0.5);
  EXPECT_EQ(a.imag_residual, 0.01);
  a = realize(std::polar(1.0, kPi / 2));
  EXPECT_NEAR(a.value, 0.0, 1e-16);
  EXPECT_NEAR(a.imag_residual, 1.0, 1e-16);
}

TEST(DoNothingStructured, ClosedForm) {
  ProtocolParams p = ghz(10);
  p.r = 0.5;
  const double q = 0.5;
  const MetricsRow m = do_nothing_structured(p);
  EXPECT_NEAR(m.fidelity, 0.25 + 0.25 * std::pow(0.5, 10) + 0.25 * std::pow(q, 10) + 0.5 * std::pow(q, 5), 1e-14);
  EXPECT_NEAR(m.qfi, std::pow(q, 10) * 100 / (0.5 + 0.5 * std::pow(0.5, 10) + 0.5 * std::pow(q, 10)), 1e-12);
}
