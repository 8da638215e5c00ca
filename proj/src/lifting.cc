// SPDX-License-Identifier: Apache-2.0

#include "bcd/lifting.h"

#include <algorithm>
#include <optional>

namespace bcd {
namespace {

void FillConstants(const ReductionParams& p, LiftTrace* t) {
  t->eta = p.alpha / (1 - p.alpha);
  t->gamma = Pow2(-p.l);
  t->delta = 3 * p.epsilon;
  t->sqrt_epsilon = RationalSqrt(p.epsilon);
  t->sqrt_delta = RationalSqrt(t->delta);
  t->nu = 13 * p.epsilon / 4 + 4 * t->sqrt_epsilon.value;
}

Menu PerTypeZeroMenu(const InstanceView& view) {
  Menu menu;
  for (int k = 0; k < view.K(); ++k) {
    menu.contracts.push_back(Contract{Zeros(view.m()), true});
    menu.actions.push_back(std::max(OptOutAction(view, k), 0));
  }
  return menu;
}

// Steps (b) to (e) of the backward pipeline.
struct BackwardState {
  Menu breve;       // K + 1 contracts on the reduced outcomes
  Menu restricted;  // the first K contracts of breve on the original outcomes
  std::vector<int> block;  // block of each real type's action; K for the dummy
  std::vector<int> theta_hat;
  std::vector<int> theta_hat_1;
  std::vector<int> theta_hat_2;
  std::vector<int> reassigned;
  Menu breve_star;
  Menu hat_star;
};

BackwardState RunBackwardSteps(const InstanceView& multi, const Reduction& reduction,
                               const Menu& pbar) {
  const ReductionMap& map = reduction.map;
  const int K = map.K;
  const int m = map.m;
  BackwardState s;
  s.breve = pbar;
  for (Contract& c : s.breve.contracts) c.payments[map.dummy_outcome] = 0;
  for (int q = 0; q < K; ++q) {
    Contract c = s.breve.contracts[q];
    c.payments.resize(m);
    s.restricted.contracts.push_back(std::move(c));
    s.restricted.actions.push_back(0);
  }
  s.breve_star = s.restricted;
  for (int k = 0; k < K; ++k) {
    const int row = pbar.actions[k];
    const int blk = row == map.dummy_action ? K : map.Block(row);
    s.block.push_back(blk);
    if (blk == k) {
      s.breve_star.actions[k] = map.ActionInBlock(row);
      continue;
    }
    s.theta_hat.push_back(k);
    MenuChoice choice = BestMenuChoice(multi, k, s.restricted);
    s.reassigned.push_back(choice.contract);
    s.breve_star.contracts[k] = s.restricted.contracts[choice.contract];
    s.breve_star.actions[k] = choice.response.action;
  }
  s.hat_star = s.breve_star;
  for (int k : s.theta_hat) {
    const Rational u = TypePrincipalUtility(multi, k, s.breve_star.contracts[k].payments,
                                            s.breve_star.actions[k]);
    if (sgn(u) < 0) {
      s.theta_hat_2.push_back(k);
      const int opt_out = OptOutAction(multi, k);
      if (opt_out < 0) throw std::logic_error("type has no zero-cost action");
      s.hat_star.actions[k] = opt_out;
    } else {
      s.theta_hat_1.push_back(k);
    }
  }
  return s;
}

}  // namespace

SqrtValue RationalSqrt(const Rational& x) {
  SqrtValue out;
  if (ExactSqrt(x, &out.value)) {
    out.exact = true;
    out.error_bound = 0;
    return out;
  }
  out.value = SqrtUpper(x);
  // value - sqrt(x) = (value^2 - x) / (value + sqrt(x)) <= (value^2 - x) / value.
  out.error_bound = (out.value * out.value - x) / out.value;
  return out;
}

const char* ForwardCaseName(ForwardCase c) {
  return c == ForwardCase::kPaymentBlowup ? "payment-blowup" : "shift";
}

const char* BackwardCaseName(BackwardCase c) {
  return c == BackwardCase::kNegativeUtility ? "negative-utility" : "pipeline";
}

Rational MaxRegret(const InstanceView& view, const Menu& menu) {
  CheckMenuShape(view, menu);
  Rational worst = 0;
  for (int k = 0; k < view.K(); ++k) {
    const Rational honest = AgentUtility(view, k, menu.contracts[k].payments, menu.actions[k]);
    for (int q = 0; q < menu.num_types(); ++q) {
      for (int i = 0; i < view.n(); ++i) {
        Rational gain = AgentUtility(view, k, menu.contracts[q].payments, i) - honest;
        if (gain > worst) worst = gain;
      }
    }
  }
  return worst;
}

LiftResult LiftForward(const MultiParamInstance& multi, const Reduction& reduction,
                       const Menu& menu) {
  const InstanceView vm(multi);
  const InstanceView vs(reduction.instance);
  CheckMenuShape(vm, menu);
  IcCertificate cert = VerifyIc(vm, menu, 0);
  if (!cert.passed) {
    const IcViolation& v = cert.violations.front();
    throw IcRejected("input menu is not IC: type " + std::to_string(v.type) + " gains " +
                         ToString(v.deficit) + " reporting " + std::to_string(v.reported) +
                         " and playing " + std::to_string(v.action),
                     cert);
  }
  const ReductionMap& map = reduction.map;
  const ReductionParams& p = map.params;
  const int K = map.K;
  LiftResult out;
  LiftTrace& t = out.trace;
  t.direction = "forward";
  FillConstants(p, &t);

  const Rational cap = 2 / p.mu_min;
  for (int k = 0; k < K && t.blowup_type < 0; ++k) {
    for (int q = 0; q < K && t.blowup_type < 0; ++q) {
      for (int a = 0; a < map.n; ++a) {
        if (Dot(multi.transitions[k][a], menu.contracts[q].payments) > cap) {
          t.blowup_type = k;
          t.blowup_reported = q;
          t.blowup_action = a;
          break;
        }
      }
    }
  }
  if (t.blowup_type >= 0) {
    t.forward_case = ForwardCase::kPaymentBlowup;
    out.menu = ZeroMenu(vs, map.dummy_action);
  } else {
    t.forward_case = ForwardCase::kShift;
    const Rational shift = 2 * p.epsilon;
    for (int k = 0; k < K; ++k) {
      Contract c = menu.contracts[k];
      for (Rational& x : c.payments) x += shift;
      c.payments.push_back(Rational(0));
      out.menu.contracts.push_back(std::move(c));
      out.menu.actions.push_back(map.Row(k, menu.actions[k]));
    }
    // A single contract stays single: the extra type sees the shared contract
    // and still opts out, since every real action costs it more than it earns.
    if (menu.IsSingleContract()) {
      out.menu.contracts.push_back(out.menu.contracts.front());
    } else {
      out.menu.contracts.push_back(Contract{Zeros(map.m + 1), true});
    }
    out.menu.actions.push_back(map.dummy_action);
  }
  t.utility_multi = PrincipalUtility(vm, menu);
  t.utility_single = PrincipalUtility(vs, out.menu);
  t.bound = p.H * (t.utility_multi - 2 * p.epsilon);
  t.bound_holds = t.utility_single >= t.bound;
  t.output_certificate = VerifyIc(vs, out.menu, 0);
  return out;
}

LiftResult LiftBackward(const MultiParamInstance& multi, const Reduction& reduction,
                        const Menu& menu) {
  const InstanceView vm(multi);
  const InstanceView vs(reduction.instance);
  CheckMenuShape(vs, menu);
  IcCertificate cert = VerifyIc(vs, menu, 0);
  if (!cert.passed) {
    throw IcRejected("input menu is not IC on the reduced instance", cert);
  }
  const ReductionParams& p = reduction.map.params;
  LiftResult out;
  LiftTrace& t = out.trace;
  t.direction = "backward";
  FillConstants(p, &t);
  t.utility_single = PrincipalUtility(vs, menu);

  if (sgn(t.utility_single) < 0) {
    t.backward_case = BackwardCase::kNegativeUtility;
    out.menu = PerTypeZeroMenu(vm);
  } else {
    t.backward_case = BackwardCase::kPipeline;
    BackwardState s = RunBackwardSteps(vm, reduction, menu);
    // An exactly IC menu needs no blending; weight 0 is the identity repair.
    const bool needs_repair = !VerifyIc(vm, s.hat_star, 0).passed;
    RepairResult repair = needs_repair ? IcRepair(vm, s.hat_star, t.delta, t.sqrt_delta)
                                       : IcRepair(vm, s.hat_star, 0, SqrtValue{0, true, 0});
    t.repair_blend = repair.blend;
    t.theta_hat = s.theta_hat;
    t.theta_hat_1 = s.theta_hat_1;
    t.theta_hat_2 = s.theta_hat_2;
    t.reassigned_contract = s.reassigned;
    t.breve = std::move(s.breve);
    t.breve_star = std::move(s.breve_star);
    t.hat_star = std::move(s.hat_star);
    t.repair_choice = repair.choice;
    out.menu = std::move(repair.menu);
  }
  t.utility_multi = PrincipalUtility(vm, out.menu);
  t.bound = p.H * (t.utility_multi + t.nu);
  t.bound_holds = t.utility_single <= t.bound;
  t.output_certificate = VerifyIc(vm, out.menu, 0);
  return out;
}

RepairResult IcRepair(const InstanceView& view, const Menu& menu, const Rational& delta,
                      const SqrtValue& sqrt_delta) {
  CheckMenuShape(view, menu);
  const Rational& s = sqrt_delta.value;
  if (sgn(s) < 0 || s * s < delta) {
    throw std::invalid_argument("blend weight is below sqrt(delta)");
  }
  IcCertificate cert = VerifyIc(view, menu, delta);
  if (!cert.passed) {
    throw IcRejected("menu is not " + ToString(delta) + "-IC", cert);
  }
  Menu aux = menu;
  for (Contract& c : aux.contracts) {
    for (int w = 0; w < view.m(); ++w) {
      c.payments[w] = (1 - s) * c.payments[w] + s * view.rewards()[w];
    }
  }
  RepairResult out;
  out.blend = s;
  for (int k = 0; k < view.K(); ++k) {
    const Rational own =
        AgentUtility(view, k, aux.contracts[k].payments, menu.actions[k]);
    MenuChoice choice = BestMenuChoice(view, k, aux);
    if (choice.response.agent_utility == own) {
      out.choice.push_back(k);
      out.menu.contracts.push_back(aux.contracts[k]);
      out.menu.actions.push_back(menu.actions[k]);
    } else {
      out.choice.push_back(choice.contract);
      out.menu.contracts.push_back(aux.contracts[choice.contract]);
      out.menu.actions.push_back(choice.response.action);
    }
  }
  out.utility_before = PrincipalUtility(view, menu);
  out.utility_after = PrincipalUtility(view, out.menu);
  out.loss_bound = 2 * s;
  out.loss_within_bound = out.utility_before - out.utility_after <= out.loss_bound;
  return out;
}

ExactRecovery ExactRecover(const MultiParamInstance& multi, const Reduction& reduction,
                           const Menu& optimal, bool single_contract,
                           const SolverOptions& options) {
  ExactRecovery out;
  out.backward = LiftBackward(multi, reduction, optimal);
  out.profile = out.backward.menu.actions;
  ProfileSolution sol =
      SolveMenuForProfile(InstanceView(multi), out.profile, single_contract, options);
  if (sol.lp.status != LpStatus::kOptimal) {
    throw std::logic_error("induced action profile is not implementable");
  }
  out.menu = std::move(sol.menu);
  out.value = sol.value;
  return out;
}

BackwardDiagnostics DiagnoseBackward(const MultiParamInstance& multi,
                                     const Reduction& reduction, const Menu& menu,
                                     bool assume_precondition) {
  const InstanceView vm(multi);
  const InstanceView vs(reduction.instance);
  CheckMenuShape(vs, menu);
  const ReductionMap& map = reduction.map;
  const ReductionParams& p = map.params;
  const int K = map.K;
  LiftTrace constants;
  FillConstants(p, &constants);

  BackwardDiagnostics d;
  d.precondition = VerifyIc(vs, menu, 0).passed && sgn(PrincipalUtility(vs, menu)) >= 0;
  d.vacuous = !d.precondition;
  BackwardState s = RunBackwardSteps(vm, reduction, menu);

  auto add = [&d](const std::string& name, const Rational& slack, bool extra_ok = true) {
    d.predicates.push_back({name, extra_ok && sgn(slack) >= 0, slack});
  };

  // Dummy-outcome payments.
  {
    const Rational& top = menu.contracts[K].payments[map.dummy_outcome];
    Rational slack = constants.eta - top;
    for (int k = 0; k < K; ++k) {
      slack = std::min(slack, Rational(top - menu.contracts[k].payments[map.dummy_outcome]));
    }
    add("dummy-payment", slack, menu.actions[K] == map.dummy_action);
  }
  // No type plays in a lower block.
  {
    Rational slack = K;
    for (int k = 0; k < K; ++k) slack = std::min(slack, Rational(s.block[k] - k));
    add("block-order", slack);
  }
  // Expected payment on the original outcomes.
  {
    Rational worst = 0;
    for (int k = 0; k < K; ++k) {
      if (s.block[k] == K) continue;
      const int row = menu.actions[k];
      const Vector& f = multi.transitions[s.block[k]][map.ActionInBlock(row)];
      Vector pay = menu.contracts[k].payments;
      pay.resize(map.m);
      worst = std::max(worst, Dot(f, pay));
    }
    add("payment-bound", 4 / p.mu_min - worst);
  }
  add("eta-ic", constants.eta - MaxRegret(vs, s.breve));
  // Principal utility from the reassigned types before reassignment.
  {
    Rational slack = 0;
    bool first = true;
    for (int k : s.theta_hat) {
      const Rational got = reduction.instance.prior[k] *
                           TypePrincipalUtility(vs, k, s.breve.contracts[k].payments,
                                                s.breve.actions[k]);
      const Rational cap = multi.prior[k] * p.H * constants.gamma;
      slack = first ? cap - got : std::min(slack, Rational(cap - got));
      first = false;
    }
    add("small-loss", slack);
  }
  // Agent utility of the reassigned types afterwards.
  {
    Rational slack = 0;
    bool first = true;
    for (int k : s.theta_hat) {
      const Rational u = AgentUtility(vm, k, s.breve_star.contracts[k].payments,
                                      s.breve_star.actions[k]);
      slack = first ? constants.delta - u : std::min(slack, Rational(constants.delta - u));
      first = false;
    }
    add("small-utility", slack);
  }
  const bool judged = d.precondition || assume_precondition;
  const bool all_pass = std::all_of(d.predicates.begin(), d.predicates.end(),
                                    [](const PredicateResult& r) { return r.passed; });
  d.contradiction = judged && !all_pass;
  return d;
}

}  // namespace bcd
