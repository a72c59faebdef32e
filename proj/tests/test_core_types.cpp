#include <gtest/gtest.h>

#include "qffcr/core_types.hpp"

using namespace qffcr;

namespace {

ProtocolParams point(double r) {
  ProtocolParams p;
  p.n_qubits = 10;
  p.gamma = kPi / 2;
  p.theta = kPi / 4;
  p.r = r;
  return p;
}

}  // namespace

TEST(ValidateParams, AcceptsInRange) {
  const ProtocolParams p = point(0.5);
  EXPECT_EQ(validate_params(p), p);
  EXPECT_EQ(validate_params(validate_params(p)), p);
}

TEST(ValidateParams, RejectsROutsideUnitInterval) {
  try {
    validate_params(point(1.2));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.field(), "r");
  }
}

TEST(ValidateParams, RejectsEmptyRegister) {
  ProtocolParams p = point(0.5);
  p.n_qubits = 0;
  try {
    validate_params(p);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.field(), "n_qubits");
  }
}

TEST(ValidateParams, ThetaDomainFollowsLimits) {
  ProtocolParams p = point(0.1);
  p.theta = 2.5;
  EXPECT_THROW(validate_params(p), DomainError);
  ParamLimits wide;
  wide.wide_theta = true;
  EXPECT_NO_THROW(validate_params(p, wide));
  p.theta = 3.3;
  EXPECT_THROW(validate_params(p, wide), DomainError);
  p.theta = 1.5707963268;  // pi/2 to ten digits
  EXPECT_NO_THROW(validate_params(p));
  p.theta = kPi / 2 + 1e-6;
  EXPECT_THROW(validate_params(p), DomainError);
}

TEST(ValidateParams, RejectsNonFinite) {
  ProtocolParams p = point(0.1);
  p.eta = std::nan("");
  EXPECT_THROW(validate_params(p), DomainError);
}

TEST(BranchClasses, PascalRows) {
  const auto two = branch_classes(2);
  ASSERT_EQ(two.size(), 3U);
  EXPECT_EQ(two[0].k, 0);
  EXPECT_EQ(two[0].multiplicity, 1);
  EXPECT_EQ(two[1].multiplicity, 2);
  EXPECT_EQ(two[2].multiplicity, 1);

  const auto one = branch_classes(1);
  ASSERT_EQ(one.size(), 2U);
  EXPECT_EQ(one[0].multiplicity, 1);
  EXPECT_EQ(one[1].multiplicity, 1);

  BigCount sum = 0;
  for (const auto& c : branch_classes(10)) sum += c.multiplicity;
  EXPECT_EQ(sum, 1024);
}

TEST(BranchClasses, SumsToPowerOfTwo) {
  for (int n : {1, 5, 33, 64, 200}) {
    BigCount sum = 0;
    for (const auto& c : branch_classes(n)) sum += c.multiplicity;
    EXPECT_EQ(sum, BigCount(1) << n) << n;
  }
}

TEST(Binomial, OverflowFallsBackToBigInteger) {
  EXPECT_EQ(binomial_u64(64, 32), 1832624140942590534ULL);
  EXPECT_THROW(binomial_u64(70, 35), std::overflow_error);
  EXPECT_EQ(binomial(70, 35), BigCount("112186277816662845432"));
}

TEST(Names, RoundTrip) {
  for (Engine e : {Engine::dense, Engine::structured, Engine::closedform_appendix, Engine::closedform_verbatim}) {
    EXPECT_EQ(parse_engine(to_string(e)), e);
  }
  for (Convention c : {Convention::paper, Convention::physical}) EXPECT_EQ(parse_convention(to_string(c)), c);
  EXPECT_FALSE(parse_engine("bogus"));
}

TEST(MetricsRow, PhysicalRange) {
  MetricsRow row;
  row.probability = 1.0;
  row.fidelity = 0.7;
  row.qfi = 3.0;
  EXPECT_TRUE(row.physical());
  row.fidelity = 1.3;
  EXPECT_FALSE(row.physical());
  row.fidelity = 0.5;
  row.qfi = -1.0;
  EXPECT_FALSE(row.physical());
  row.qfi = 120.0;
  EXPECT_TRUE(row.physical());
  EXPECT_FALSE(row.physical(1e-9, 100.0));
}
