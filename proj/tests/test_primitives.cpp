#include <gtest/gtest.h>

#include "qffcr/primitives.hpp"

using namespace qffcr;

namespace {

constexpr double kTol = 1e-15;

Op2 gram(const Op2& a) { return a.adjoint() * a; }

}  // namespace

TEST(WeakMeasurement, Examples) {
  EXPECT_LT(weak_meas_op(Outcome::zero, kPi / 2).distance((1 / std::sqrt(2.0)) * Op2::identity()), kTol);
  EXPECT_LT(weak_meas_op(Outcome::zero, 0.0).distance(Op2::diag(1.0, 0.0)), kTol);
  EXPECT_LT(weak_meas_op(Outcome::one, kPi / 3).distance(Op2::diag(0.5, std::sqrt(3.0) / 2)), kTol);
  EXPECT_THROW(weak_meas_op(Outcome::zero, -0.1), DomainError);
  EXPECT_THROW(weak_meas_op(Outcome::zero, 3.2), DomainError);
}

TEST(WeakMeasurement, Completeness) {
  for (int i = 0; i <= 20; ++i) {
    const double th = kPi * i / 20;
    const Op2 sum = gram(weak_meas_op(Outcome::zero, th)) + gram(weak_meas_op(Outcome::one, th));
    EXPECT_LT(sum.distance(Op2::identity()), kTol) << th;
  }
}

TEST(Flip, Examples) {
  EXPECT_LT(flip_op(Outcome::zero).distance(Op2::identity()), 0.0 + kTol);
  Op2 x;
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  EXPECT_LT(flip_op(Outcome::one).distance(x), kTol);
  EXPECT_LT((flip_op(Outcome::one) * flip_op(Outcome::one)).distance(Op2::identity()), kTol);
}

TEST(AdcKraus, Examples) {
  auto [e0, e1] = adc_kraus(0.0);
  EXPECT_LT(e0.distance(Op2::identity()), kTol);
  EXPECT_LT(e1.distance(Op2::zero()), kTol);

  std::tie(e0, e1) = adc_kraus(1.0);
  EXPECT_LT(e0.distance(Op2::diag(1.0, 0.0)), kTol);
  EXPECT_LT(e1.distance(Op2::basis(0, 1)), kTol);

  std::tie(e0, e1) = adc_kraus(0.5);
  EXPECT_LT(e0.distance(Op2::diag(1.0, std::sqrt(0.5))), kTol);
  EXPECT_THROW(adc_kraus(-0.01), DomainError);
  EXPECT_THROW(adc_kraus(1.01), DomainError);
}

TEST(AdcKraus, Completeness) {
  for (int i = 0; i <= 50; ++i) {
    const auto [e0, e1] = adc_kraus(i / 50.0);
    EXPECT_LT((gram(e0) + gram(e1)).distance(Op2::identity()), kTol);
  }
}

TEST(Rotation, Examples) {
  EXPECT_LT(rotation_op(Outcome::zero, 0.0).distance(Op2::identity()), kTol);
  EXPECT_LT(rotation_op(Outcome::zero, kPi).distance(Op2::diag(cplx{0, 1}, cplx{0, -1})), 1e-15);
  for (double eta : {0.3, 1.7, -2.2}) {
    const Op2 t0 = rotation_op(Outcome::zero, eta);
    EXPECT_LT(rotation_op(Outcome::one, eta).distance(t0.adjoint()), kTol);
    EXPECT_LT(gram(t0).distance(Op2::identity()), kTol);
  }
}

TEST(AdcBasisAction, Examples) {
  const AdcAction id = adc_basis_action(0.0);
  EXPECT_LT(id.ket0bra0.distance(Op2::basis(0, 0)), kTol);
  EXPECT_LT(id.ket1bra1.distance(Op2::basis(1, 1)), kTol);
  EXPECT_LT(id.ket1bra0.distance(Op2::basis(1, 0)), kTol);
  EXPECT_LT(id.ket0bra1.distance(Op2::basis(0, 1)), kTol);

  EXPECT_LT(adc_basis_action(1.0).ket1bra1.distance(Op2::basis(0, 0)), kTol);
  EXPECT_LT(adc_basis_action(0.19).ket0bra1.distance(0.9 * Op2::basis(0, 1)), 1e-15);
}

TEST(AdcBasisAction, MatchesKrausSum) {
  for (double r : {0.0, 0.13, 0.5, 0.87, 1.0}) {
    const AdcAction a = adc_basis_action(r);
    EXPECT_LT(a.ket0bra0.distance(apply_adc(Op2::basis(0, 0), r)), kTol);
    EXPECT_LT(a.ket1bra1.distance(apply_adc(Op2::basis(1, 1), r)), kTol);
    EXPECT_LT(a.ket1bra0.distance(apply_adc(Op2::basis(1, 0), r)), kTol);
    EXPECT_LT(a.ket0bra1.distance(apply_adc(Op2::basis(0, 1), r)), kTol);
  }
}

TEST(DecayProbability, Examples) {
  EXPECT_DOUBLE_EQ(decay_probability(2.5, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(decay_probability(0.0, 4.0), 1.0);
  EXPECT_NEAR(decay_probability(1.0, std::log(2.0)), 0.5, 1e-15);
}

TEST(Rotation, Conventions) {
  Op2 rho = Op2::basis(0, 1) + Op2::basis(1, 0);
  const Op2 t = rotation_op(Outcome::zero, 0.4);
  const Op2 phys = apply_rotation(t, rho, Convention::physical);
  const Op2 paper = apply_rotation(t, rho, Convention::paper);
  EXPECT_LT(phys.distance(t * rho * t.adjoint()), kTol);
  EXPECT_LT(paper.distance(t * rho * t), kTol);
  // Same-operator sandwich leaves the off-diagonals of a pure coherence unchanged.
  EXPECT_LT(std::abs(paper(0, 1) - 1.0), kTol);
}
