#include "bcd/instance.h"

#include <gtest/gtest.h>

#include "testing.h"

namespace bcd {
namespace {

bool Mentions(const std::vector<Violation>& v, const std::string& needle) {
  for (const Violation& x : v) {
    if (x.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(Validate, I0IsClean) {
  EXPECT_TRUE(Validate(testing::MakeI0()).empty());
  EXPECT_TRUE(Validate(testing::MakeI0Multi()).empty());
}

TEST(Validate, RowNotStochastic) {
  SingleParamInstance inst = testing::MakeI0();
  inst.transitions[1] = {Rational(1, 2), Rational(2, 5)};
  auto v = Validate(inst);
  EXPECT_TRUE(HasErrors(v));
  EXPECT_TRUE(Mentions(v, "sums to 9/10"));
}

TEST(Validate, OptOutCostMustBeZero) {
  SingleParamInstance inst = testing::MakeI0();
  inst.unit_costs[0] = Rational(1, 2);
  auto v = Validate(inst);
  EXPECT_TRUE(HasErrors(v));
  EXPECT_TRUE(Mentions(v, "opt-out cost nonzero"));

  MultiParamInstance multi = testing::MakeI0Multi();
  multi.costs[0][0] = Rational(1, 3);
  EXPECT_TRUE(Mentions(Validate(multi), "opt-out cost nonzero"));
}

TEST(Validate, TypesMustIncrease) {
  SingleParamInstance inst = testing::MakeI0();
  inst.types = {Rational(1), Rational(1)};
  inst.prior = {Rational(1, 2), Rational(1, 2)};
  auto v = Validate(inst);
  EXPECT_TRUE(HasErrors(v));
  EXPECT_TRUE(Mentions(v, "types not strictly increasing"));
}

TEST(Validate, PriorMustBePositiveAndSumToOne) {
  MultiParamInstance inst = testing::MakeI0Multi();
  inst.prior = {Rational(1, 2)};
  EXPECT_TRUE(Mentions(Validate(inst), "prior sums to 1/2"));
  inst.prior = {Rational(0)};
  EXPECT_TRUE(HasErrors(Validate(inst)));
}

TEST(Validate, OutOfRangeRewardIsWarningOnly) {
  SingleParamInstance inst = testing::MakeI0();
  inst.rewards[1] = Rational(3);
  auto v = Validate(inst);
  EXPECT_FALSE(v.empty());
  EXPECT_FALSE(HasErrors(v));
  ValidationOptions relaxed;
  relaxed.check_unit_bounds = false;
  EXPECT_TRUE(Validate(inst, relaxed).empty());
}

TEST(Validate, RandomInstancesAreClean) {
  testing::Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    EXPECT_FALSE(HasErrors(Validate(testing::RandomMulti(rng, 3, 2, 2))));
    EXPECT_FALSE(HasErrors(Validate(testing::RandomSingle(rng, 3, 3, 3))));
  }
}

TEST(Utilities, I0Values) {
  SingleParamInstance inst = testing::MakeI0();
  InstanceView view(inst);
  Vector p{Rational(0), Rational(1, 2)};
  EXPECT_EQ(AgentUtility(view, 0, p, 1), Rational(0));
  EXPECT_EQ(AgentUtility(view, 0, Zeros(2), 1), Rational(-1, 2));
  EXPECT_EQ(TypePrincipalUtility(view, 0, p, 1), Rational(1, 2));
  Menu menu{{Contract{p}}, {1}};
  EXPECT_EQ(PrincipalUtility(view, menu), Rational(1, 2));
  EXPECT_EQ(PrincipalUtility(view, ZeroMenu(view, 0)), Rational(0));
  EXPECT_EQ(OptOutAction(view, 0), 0);
}

TEST(Utilities, ViewsAgreeAcrossKinds) {
  InstanceView single(testing::MakeI0());
  MultiParamInstance m = testing::MakeI0Multi();
  InstanceView multi(m);
  EXPECT_TRUE(single.single_parameter());
  EXPECT_FALSE(multi.single_parameter());
  // I0 with theta = 1/2 has costs (0, 1/2), the multi-parameter copy's costs.
  SingleParamInstance s = testing::MakeI0();
  InstanceView sv(s);
  EXPECT_EQ(sv.costs(0), multi.costs(0));
}

TEST(Utilities, LinearInPayments) {
  testing::Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    MultiParamInstance inst = testing::RandomMulti(rng, 3, 3, 2);
    InstanceView view(inst);
    Vector p, q;
    for (int w = 0; w < 3; ++w) {
      p.push_back(testing::RandomUnit(rng));
      q.push_back(testing::RandomUnit(rng));
    }
    const int k = t % 2;
    const int a = t % 3;
    const Rational s = testing::RandomUnit(rng);
    // Principal plus agent utility is surplus, independent of payments.
    EXPECT_EQ(TypePrincipalUtility(view, k, p, a) + AgentUtility(view, k, p, a),
              TypePrincipalUtility(view, k, q, a) + AgentUtility(view, k, q, a));
    EXPECT_EQ(AgentUtility(view, k, Add(p, Scale(s, q)), a) + view.cost(k, a),
              AgentUtility(view, k, p, a) + view.cost(k, a) +
                  s * (AgentUtility(view, k, q, a) + view.cost(k, a)));
  }
}

TEST(CheckMenuShape, RejectsBadMenus) {
  SingleParamInstance inst = testing::MakeI0();
  InstanceView view(inst);
  EXPECT_NO_THROW(CheckMenuShape(view, ZeroMenu(view, 0)));
  EXPECT_THROW(CheckMenuShape(view, Menu{{Contract{Zeros(3)}}, {0}}), DimensionError);
  EXPECT_THROW(CheckMenuShape(view, Menu{{Contract{Zeros(2)}}, {2}}), DimensionError);
  EXPECT_THROW(CheckMenuShape(view, Menu{{}, {}}), DimensionError);
}

TEST(Menu, IsSingleContract) {
  Menu a{{Contract{{Rational(1)}}, Contract{{Rational(1)}}}, {0, 0}};
  EXPECT_TRUE(a.IsSingleContract());
  a.contracts[1].payments[0] = 2;
  EXPECT_FALSE(a.IsSingleContract());
}

}  // namespace
}  // namespace bcd
