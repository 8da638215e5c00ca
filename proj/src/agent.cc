// SPDX-License-Identifier: Apache-2.0

#include "bcd/agent.h"

#include <algorithm>

namespace bcd {

BestResponse ComputeBestResponse(const InstanceView& view, int type, const Vector& payments) {
  if (static_cast<int>(payments.size()) != view.m()) {
    throw DimensionError("contract length " + std::to_string(payments.size()) +
                         " does not match " + std::to_string(view.m()) + " outcomes");
  }
  if (type < 0 || type >= view.K()) throw DimensionError("type index out of range");
  BestResponse br;
  br.agent_utilities.resize(view.n());
  br.principal_utilities.resize(view.n());
  Vector margin = Sub(view.rewards(), payments);
  for (int i = 0; i < view.n(); ++i) {
    const Vector& row = view.F(type)[i];
    br.agent_utilities[i] = Dot(row, payments) - view.cost(type, i);
    br.principal_utilities[i] = Dot(row, margin);
    if (br.action < 0 || br.agent_utilities[i] > br.agent_utility ||
        (br.agent_utilities[i] == br.agent_utility &&
         br.principal_utilities[i] > br.principal_utility)) {
      br.action = i;
      br.agent_utility = br.agent_utilities[i];
      br.principal_utility = br.principal_utilities[i];
    }
  }
  return br;
}

MenuChoice BestMenuChoice(const InstanceView& view, int type, const Menu& menu) {
  MenuChoice best;
  for (int k = 0; k < menu.num_types(); ++k) {
    BestResponse br = ComputeBestResponse(view, type, menu.contracts[k].payments);
    if (best.contract < 0 || br.agent_utility > best.response.agent_utility ||
        (br.agent_utility == best.response.agent_utility &&
         br.principal_utility > best.response.principal_utility)) {
      best.contract = k;
      best.response = std::move(br);
    }
  }
  return best;
}

IcCertificate VerifyIc(const InstanceView& view, const Menu& menu, const Rational& eta) {
  CheckMenuShape(view, menu);
  IcCertificate cert;
  cert.slack = eta;
  cert.constant_menu = menu.IsSingleContract();
  const int K = view.K();
  const int n = view.n();
  // Utility of type k under contract q for every action, computed once.
  auto utilities = [&](int k, int q) {
    Vector u(n);
    for (int i = 0; i < n; ++i) {
      u[i] = Dot(view.F(k)[i], menu.contracts[q].payments) - view.cost(k, i);
    }
    return u;
  };
  for (int k = 0; k < K; ++k) {
    const Vector own = utilities(k, k);
    const Rational& honest = own[menu.actions[k]];
    const Rational floor = honest + eta;
    for (int q = 0; q < K; ++q) {
      if (cert.constant_menu && q != k) continue;
      const Vector u = q == k ? own : utilities(k, q);
      for (int i = 0; i < n; ++i) {
        ++cert.constraints_checked;
        if (q != k) ++cert.misreport_constraints_checked;
        if (u[i] > floor) {
          cert.passed = false;
          cert.violations.push_back({k, q, i, u[i] - floor});
        }
      }
    }
    bool negative_payment = std::any_of(
        menu.contracts[k].payments.begin(), menu.contracts[k].payments.end(),
        [](const Rational& x) { return sgn(x) < 0; });
    if (OptOutAction(view, k) < 0 || negative_payment) {
      ++cert.ir_constraints_checked;
      if (sgn(honest) < 0) {
        cert.passed = false;
        cert.violations.push_back({k, k, -1, -honest});
      }
    }
  }
  return cert;
}

}  // namespace bcd
