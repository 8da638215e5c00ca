#include "bcd/lifting.h"

#include <gtest/gtest.h>

#include "testing.h"

namespace bcd {
namespace {

const Rational kEps(1, 400);

// An IC menu for a random feasible profile, from the profile LP.
Menu RandomIcMenu(testing::Rng& rng, const MultiParamInstance& inst, bool single) {
  InstanceView view(inst);
  while (true) {
    ActionProfile profile;
    for (int k = 0; k < view.K(); ++k) {
      profile.push_back(std::uniform_int_distribution<int>(0, view.n() - 1)(rng));
    }
    ProfileSolution sol = SolveMenuForProfile(view, profile, single);
    if (sol.lp.status == LpStatus::kOptimal) return sol.menu;
  }
}

TEST(RationalSqrt, ExactAndBounded) {
  SqrtValue a = RationalSqrt(Rational(1, 400));
  EXPECT_TRUE(a.exact);
  EXPECT_EQ(a.value, Rational(1, 20));
  EXPECT_EQ(a.error_bound, 0);
  SqrtValue b = RationalSqrt(Rational(3, 400));
  EXPECT_FALSE(b.exact);
  EXPECT_GE(b.value * b.value, Rational(3, 400));
  EXPECT_GT(b.error_bound, 0);
  const Rational below = b.value - b.error_bound;
  EXPECT_LE(below * below, Rational(3, 400));
}

TEST(LiftForward, ConstantsMatchDefinitions) {
  Reduction red = Reduce(testing::MakeI0Multi(), kEps);
  LiftResult r = LiftForward(testing::MakeI0Multi(), red, ZeroMenu(testing::MakeI0Multi(), 0));
  const ReductionParams& p = red.map.params;
  EXPECT_EQ(r.trace.eta, p.alpha / (1 - p.alpha));
  EXPECT_EQ(r.trace.gamma, Pow2(-p.l));
  EXPECT_EQ(r.trace.delta, 3 * kEps);
  EXPECT_EQ(r.trace.nu, Rational(13, 1600) + Rational(4, 20));
}

TEST(LiftForward, ZeroMenuShiftsByTwoEpsilon) {
  testing::Rng rng(61);
  MultiParamInstance multi = testing::RandomMulti(rng, 2, 2, 2);
  Reduction red = Reduce(multi, kEps);
  LiftResult r = LiftForward(multi, red, ZeroMenu(multi, 0));
  EXPECT_EQ(r.trace.forward_case, ForwardCase::kShift);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(r.menu.contracts[k].payments, (Vector{2 * kEps, 2 * kEps, Rational(0)}));
  }
  EXPECT_EQ(r.trace.utility_multi, PrincipalUtility(multi, ZeroMenu(multi, 0)));
  EXPECT_TRUE(r.trace.bound_holds);
  EXPECT_TRUE(r.menu.IsSingleContract());
}

TEST(LiftForward, I0) {
  MultiParamInstance multi = testing::MakeI0Multi();
  Reduction red = Reduce(multi, kEps);
  Menu menu{{Contract{{Rational(0), Rational(1, 2)}}}, {1}};
  LiftResult r = LiftForward(multi, red, menu);
  EXPECT_EQ(r.menu.contracts[0].payments,
            (Vector{2 * kEps, Rational(1, 2) + 2 * kEps, Rational(0)}));
  EXPECT_EQ(r.menu.actions, (std::vector<int>{red.map.Row(0, 1), red.map.dummy_action}));
  EXPECT_TRUE(r.trace.bound_holds);
  EXPECT_TRUE(r.trace.output_certificate.passed);
}

TEST(LiftForward, PaymentBlowupGivesZeroMenu) {
  MultiParamInstance multi = testing::MakeI0Multi();
  Reduction red = Reduce(multi, kEps);
  // Expected payment 3 / mu_min = 3 under every action; the agent opts out.
  Menu menu{{Contract{{Rational(3), Rational(3)}}}, {0}};
  ASSERT_TRUE(VerifyIc(multi, menu, 0).passed);
  LiftResult r = LiftForward(multi, red, menu);
  EXPECT_EQ(r.trace.forward_case, ForwardCase::kPaymentBlowup);
  EXPECT_EQ(r.trace.blowup_type, 0);
  EXPECT_EQ(r.trace.blowup_reported, 0);
  EXPECT_LT(r.trace.utility_multi, 0);
  EXPECT_EQ(r.trace.utility_single, 0);
  EXPECT_TRUE(r.trace.bound_holds);
  for (const Contract& c : r.menu.contracts) EXPECT_TRUE(IsZero(c.payments));
}

TEST(LiftForward, RejectsNonIcInput) {
  MultiParamInstance multi = testing::MakeI0Multi();
  Reduction red = Reduce(multi, kEps);
  Menu menu{{Contract{{Rational(0), Rational(1, 4)}}}, {1}};
  try {
    LiftForward(multi, red, menu);
    FAIL() << "expected IcRejected";
  } catch (const IcRejected& e) {
    EXPECT_FALSE(e.certificate().passed);
    EXPECT_EQ(e.certificate().violations[0].action, 0);
  }
}

TEST(LiftForward, LowerBoundAndClosureOnRandomMenus) {
  testing::Rng rng(62);
  for (int t = 0; t < 20; ++t) {
    MultiParamInstance multi = testing::RandomMulti(rng, 2, 2, 2);
    Reduction red = Reduce(multi, kEps);
    for (bool single : {false, true}) {
      Menu menu = RandomIcMenu(rng, multi, single);
      LiftResult r = LiftForward(multi, red, menu);
      const Rational us = PrincipalUtility(red.instance, r.menu);
      const Rational um = PrincipalUtility(multi, menu);
      EXPECT_GE(us, red.map.params.H * (um - 2 * kEps));
      EXPECT_EQ(r.trace.bound_holds, true);
      EXPECT_TRUE(r.trace.output_certificate.passed);
      if (single) EXPECT_TRUE(r.menu.IsSingleContract());
    }
  }
}

TEST(LiftBackward, ZeroMenuComesBackZero) {
  testing::Rng rng(63);
  MultiParamInstance multi = testing::RandomMulti(rng, 2, 2, 2);
  Reduction red = Reduce(multi, kEps);
  InstanceView vs(red.instance);
  LiftResult r = LiftBackward(multi, red, ZeroMenu(vs, red.map.dummy_action));
  for (const Contract& c : r.menu.contracts) EXPECT_TRUE(IsZero(c.payments));
  EXPECT_EQ(r.trace.repair_blend, 0);
  EXPECT_EQ(r.trace.utility_single, 0);
  EXPECT_TRUE(r.trace.bound_holds);
  EXPECT_TRUE(r.trace.output_certificate.passed);
  EXPECT_LE(0, red.map.params.H * r.trace.nu);
}

TEST(LiftBackward, TwoBlockConstruction) {
  MultiParamInstance multi = testing::MakeTwoBlockMulti();
  Reduction red = Reduce(multi, kEps);
  Menu menu = testing::MakeTwoBlockMenu(red);
  ASSERT_TRUE(VerifyIc(red.instance, menu, 0).passed);
  ASSERT_GE(PrincipalUtility(red.instance, menu), 0);
  LiftResult r = LiftBackward(multi, red, menu);
  EXPECT_EQ(r.trace.backward_case, BackwardCase::kPipeline);
  EXPECT_NE(std::find(r.trace.theta_hat.begin(), r.trace.theta_hat.end(), 0),
            r.trace.theta_hat.end());
  EXPECT_EQ(r.trace.reassigned_contract.size(), r.trace.theta_hat.size());
  EXPECT_TRUE(r.trace.bound_holds);
  EXPECT_TRUE(r.trace.output_certificate.passed);
  const Rational nu_hat = Rational(13, 1600) + Rational(4, 20);
  EXPECT_LE(r.trace.utility_single, red.map.params.H * (r.trace.utility_multi + nu_hat));
  BackwardDiagnostics d = DiagnoseBackward(multi, red, menu);
  EXPECT_TRUE(d.precondition);
  EXPECT_FALSE(d.contradiction);
}

void CheckPartition(const LiftTrace& t) {
  std::vector<int> joined = t.theta_hat_1;
  joined.insert(joined.end(), t.theta_hat_2.begin(), t.theta_hat_2.end());
  std::sort(joined.begin(), joined.end());
  EXPECT_EQ(joined, t.theta_hat);
  EXPECT_EQ(std::adjacent_find(joined.begin(), joined.end()), joined.end());
}

TEST(LiftBackward, RoundTripOnRandomMenus) {
  testing::Rng rng(64);
  const Rational nu_hat = Rational(13, 1600) + Rational(4, 20);
  int judged = 0;
  for (int t = 0; t < 20; ++t) {
    MultiParamInstance multi = testing::RandomMulti(rng, 2, 2, 2);
    Reduction red = Reduce(multi, kEps);
    const bool single = t % 2 == 1;
    Menu menu = RandomIcMenu(rng, multi, single);
    LiftResult fwd = LiftForward(multi, red, menu);
    LiftResult back = LiftBackward(multi, red, fwd.menu);
    CheckPartition(back.trace);
    EXPECT_TRUE(back.trace.output_certificate.passed);
    EXPECT_TRUE(back.trace.bound_holds);
    EXPECT_LE(back.trace.utility_single,
              red.map.params.H * (back.trace.utility_multi + nu_hat));
    // Forward then backward: the round trip loses at most 2 eps + nu.
    EXPECT_GE(back.trace.utility_multi,
              PrincipalUtility(multi, menu) - 2 * kEps - back.trace.nu);
    if (single) EXPECT_TRUE(back.menu.IsSingleContract());
    BackwardDiagnostics d = DiagnoseBackward(multi, red, fwd.menu);
    if (d.precondition) {
      ++judged;
      EXPECT_FALSE(d.contradiction);
      for (const PredicateResult& p : d.predicates) EXPECT_TRUE(p.passed) << p.name;
    }
  }
  EXPECT_GT(judged, 10);
}

TEST(LiftBackward, RejectsNonIcInput) {
  MultiParamInstance multi = testing::MakeI0Multi();
  Reduction red = Reduce(multi, kEps);
  InstanceView vs(red.instance);
  Menu menu = ZeroMenu(vs, red.map.dummy_action);
  menu.actions[0] = red.map.Row(0, 1);
  EXPECT_THROW(LiftBackward(multi, red, menu), IcRejected);
}

TEST(IcRepair, ZeroDeltaIsIdentity) {
  testing::Rng rng(65);
  MultiParamInstance multi = testing::RandomMulti(rng, 3, 2, 2);
  Menu menu = RandomIcMenu(rng, multi, false);
  RepairResult r = IcRepair(multi, menu, 0, RationalSqrt(0));
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(r.menu.contracts[k].payments, menu.contracts[k].payments);
    EXPECT_EQ(r.menu.actions[k], menu.actions[k]);
  }
  EXPECT_EQ(r.utility_after, r.utility_before);
}

// Lowers every payment of one contract by up to 1/100, which costs its owner
// at most 1/100 and only makes misreports into it less attractive.
Menu Perturb(Menu menu, int k) {
  for (Rational& x : menu.contracts[k].payments) x -= std::min(x, Rational(1, 100));
  return menu;
}

TEST(IcRepair, RepairsOneHundredthIcMenus) {
  testing::Rng rng(66);
  const Rational delta(1, 100);
  for (int t = 0; t < 20; ++t) {
    MultiParamInstance multi = testing::RandomMulti(rng, 3, 3, 2);
    Menu menu = Perturb(RandomIcMenu(rng, multi, false), t % 2);
    ASSERT_TRUE(VerifyIc(multi, menu, delta).passed);
    RepairResult r = IcRepair(multi, menu, delta, RationalSqrt(delta));
    EXPECT_EQ(r.blend, Rational(1, 10));
    EXPECT_TRUE(VerifyIc(multi, r.menu, 0).passed);
    EXPECT_LE(r.utility_before - r.utility_after, Rational(2, 10));
    EXPECT_TRUE(r.loss_within_bound);
  }
}

TEST(IcRepair, ReassignsWhenAnotherContractIsBetter) {
  MultiParamInstance multi = testing::MakeI0Multi();
  multi.transitions.push_back(multi.transitions[0]);
  multi.costs.push_back(multi.costs[0]);
  multi.prior = {Rational(1, 2), Rational(1, 2)};
  multi.type_labels = {"a", "b"};
  Menu menu{{Contract{{Rational(0), Rational(1, 2)}},
             Contract{{Rational(0), Rational(1, 2) + Rational(1, 200)}}},
            {1, 1}};
  ASSERT_FALSE(VerifyIc(multi, menu, 0).passed);
  RepairResult r = IcRepair(multi, menu, Rational(1, 100), RationalSqrt(Rational(1, 100)));
  EXPECT_EQ(r.choice, (std::vector<int>{1, 1}));
  EXPECT_TRUE(VerifyIc(multi, r.menu, 0).passed);
  EXPECT_TRUE(r.loss_within_bound);
}

TEST(IcRepair, RejectsBadInputs) {
  MultiParamInstance multi = testing::MakeI0Multi();
  Menu menu{{Contract{{Rational(0), Rational(1, 4)}}}, {1}};
  EXPECT_THROW(IcRepair(multi, menu, Rational(1, 100), RationalSqrt(Rational(1, 100))),
               IcRejected);
  EXPECT_THROW(IcRepair(multi, menu, Rational(1), SqrtValue{Rational(1, 2), false, 0}),
               std::invalid_argument);
}

TEST(ExactRecover, I0RoundTrip) {
  MultiParamInstance multi = testing::MakeI0Multi();
  const Rational eps = Pow2(-40);
  Reduction red = Reduce(multi, eps);
  SolveReport opt = SolveOptimalMenu(red.instance);
  ExactRecovery rec = ExactRecover(multi, red, opt.menu);
  EXPECT_EQ(rec.value, Rational(1, 2));
  EXPECT_EQ(rec.value, SolveOptimalMenu(multi).objective);
}

TEST(ExactRecover, ZeroRewards) {
  testing::Rng rng(67);
  MultiParamInstance multi = testing::RandomMulti(rng, 2, 2, 2);
  multi.rewards = Zeros(2);
  Reduction red = Reduce(multi, kEps);
  SolveReport opt = SolveOptimalMenu(red.instance);
  EXPECT_EQ(ExactRecover(multi, red, opt.menu).value, 0);
}

TEST(ExactRecover, RandomTwoByTwoByTwo) {
  testing::Rng rng(68);
  MultiParamInstance multi = testing::RandomMulti(rng, 2, 2, 2);
  const Rational eps = Pow2(-40);
  Reduction red = Reduce(multi, eps);
  SolveReport opt = SolveOptimalMenu(red.instance);
  ExactRecovery rec = ExactRecover(multi, red, opt.menu);
  EXPECT_EQ(rec.value, SolveOptimalMenu(multi).objective);
  SolveReport opt_single = SolveOptimalSingle(red.instance);
  EXPECT_EQ(ExactRecover(multi, red, opt_single.menu, true).value,
            SolveOptimalSingle(multi).objective);
}

TEST(DiagnoseBackward, ZeroMenuPasses) {
  MultiParamInstance multi = testing::MakeTwoBlockMulti();
  Reduction red = Reduce(multi, kEps);
  BackwardDiagnostics d =
      DiagnoseBackward(multi, red, ZeroMenu(red.instance, red.map.dummy_action));
  EXPECT_TRUE(d.precondition);
  EXPECT_FALSE(d.vacuous);
  EXPECT_FALSE(d.contradiction);
  EXPECT_EQ(d.predicates.size(), 6u);
  for (const PredicateResult& p : d.predicates) EXPECT_TRUE(p.passed) << p.name;
}

TEST(DiagnoseBackward, CheckerSelfTest) {
  // Paying a lot on the dummy outcome breaks IC, so the report is vacuous;
  // judged as if the precondition held it must flag a contradiction.
  MultiParamInstance multi = testing::MakeTwoBlockMulti();
  Reduction red = Reduce(multi, kEps);
  Menu menu = testing::MakeTwoBlockMenu(red);
  menu.contracts[0].payments[red.map.dummy_outcome] = 1;
  BackwardDiagnostics d = DiagnoseBackward(multi, red, menu);
  EXPECT_FALSE(d.precondition);
  EXPECT_TRUE(d.vacuous);
  EXPECT_FALSE(d.contradiction);
  BackwardDiagnostics forced = DiagnoseBackward(multi, red, menu, true);
  EXPECT_TRUE(forced.contradiction);
  EXPECT_FALSE(forced.predicates[0].passed);
  EXPECT_EQ(forced.predicates[0].name, "dummy-payment");
  EXPECT_LT(forced.predicates[0].slack, 0);
}

TEST(MaxRegret, ZeroForIcMenus) {
  SingleParamInstance inst = testing::MakeI0();
  Menu menu{{Contract{{Rational(0), Rational(1, 2)}}}, {1}};
  EXPECT_EQ(MaxRegret(inst, menu), 0);
  menu.actions[0] = 0;
  EXPECT_EQ(MaxRegret(inst, menu), 0);
  menu.contracts[0].payments[1] = 1;
  EXPECT_EQ(MaxRegret(inst, menu), Rational(1, 2));
}

}  // namespace
}  // namespace bcd
