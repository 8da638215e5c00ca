// SPDX-License-Identifier: Apache-2.0

#include "bcd/instance.h"

#include <algorithm>

namespace bcd {
namespace {

void CheckUnitInterval(const Rational& x, const std::string& field,
                       const ValidationOptions& options, std::vector<Violation>* out) {
  if (!options.check_unit_bounds) return;
  if (x < 0 || x > 1) {
    out->push_back({field, field + " = " + ToString(x) + " lies outside [0, 1]", true});
  }
}

void CheckStochastic(const Matrix& F, int m, const std::string& name,
                     std::vector<Violation>* out) {
  for (size_t i = 0; i < F.size(); ++i) {
    std::string row = "row " + std::to_string(i) + " of " + name;
    if (static_cast<int>(F[i].size()) != m) {
      out->push_back({row, row + " has length " + std::to_string(F[i].size()) +
                               ", expected " + std::to_string(m)});
      continue;
    }
    for (int j = 0; j < m; ++j) {
      if (F[i][j] < 0 || F[i][j] > 1) {
        out->push_back({row, row + " entry " + std::to_string(j) + " = " +
                                 ToString(F[i][j]) + " outside [0, 1]"});
      }
    }
    Rational s = Sum(F[i]);
    if (s != 1) {
      out->push_back({row, row + " sums to " + ToString(s) + " != 1"});
    }
  }
}

void CheckPrior(const Vector& prior, std::vector<Violation>* out) {
  for (size_t k = 0; k < prior.size(); ++k) {
    if (sgn(prior[k]) <= 0) {
      out->push_back({"prior", "prior of type " + std::to_string(k) + " = " +
                                   ToString(prior[k]) + " is not positive"});
    }
  }
  Rational s = Sum(prior);
  if (s != 1) out->push_back({"prior", "prior sums to " + ToString(s) + " != 1"});
}

}  // namespace

bool Menu::IsSingleContract() const {
  for (const Contract& c : contracts) {
    if (c.payments != contracts.front().payments) return false;
  }
  return true;
}

InstanceView::InstanceView(const MultiParamInstance& instance)
    : m_(instance.num_outcomes()),
      n_(instance.num_actions()),
      k_(instance.num_types()),
      single_parameter_(false),
      rewards_(&instance.rewards),
      prior_(&instance.prior),
      costs_(instance.costs) {
  for (const Matrix& F : instance.transitions) transitions_.push_back(&F);
}

InstanceView::InstanceView(const SingleParamInstance& instance)
    : m_(instance.num_outcomes()),
      n_(instance.num_actions()),
      k_(instance.num_types()),
      single_parameter_(true),
      rewards_(&instance.rewards),
      prior_(&instance.prior) {
  transitions_.assign(k_, &instance.transitions);
  costs_.reserve(k_);
  for (int k = 0; k < k_; ++k) {
    costs_.push_back(Scale(instance.types[k], instance.unit_costs));
  }
}

std::vector<Violation> Validate(const MultiParamInstance& instance,
                                const ValidationOptions& options) {
  std::vector<Violation> out;
  const int m = instance.num_outcomes();
  const int n = instance.num_actions();
  const int K = instance.num_types();
  if (m == 0) out.push_back({"rewards", "no outcomes"});
  if (n == 0) out.push_back({"transitions", "no actions"});
  if (K == 0) out.push_back({"prior", "no types"});
  if (static_cast<int>(instance.transitions.size()) != K) {
    out.push_back({"transitions", "expected one transition matrix per type"});
  }
  if (static_cast<int>(instance.costs.size()) != K) {
    out.push_back({"costs", "expected one cost vector per type"});
  }
  if (!instance.type_labels.empty() && static_cast<int>(instance.type_labels.size()) != K) {
    out.push_back({"types", "expected one label per type"});
  }
  for (int j = 0; j < m; ++j) {
    CheckUnitInterval(instance.rewards[j], "reward " + std::to_string(j), options, &out);
  }
  for (size_t k = 0; k < instance.transitions.size(); ++k) {
    const Matrix& F = instance.transitions[k];
    std::string name = "F^{theta_" + std::to_string(k + 1) + "}";
    if (static_cast<int>(F.size()) != n) {
      out.push_back({name, name + " has " + std::to_string(F.size()) + " rows, expected " +
                               std::to_string(n)});
    }
    CheckStochastic(F, m, name, &out);
  }
  for (size_t k = 0; k < instance.costs.size(); ++k) {
    const Vector& c = instance.costs[k];
    std::string name = "c^{theta_" + std::to_string(k + 1) + "}";
    if (static_cast<int>(c.size()) != n) {
      out.push_back({name, name + " has length " + std::to_string(c.size())});
      continue;
    }
    if (n > 0 && c[0] != 0) {
      out.push_back({name, "opt-out cost nonzero: " + name + "_0 = " + ToString(c[0])});
    }
    for (int i = 0; i < n; ++i) {
      if (c[i] < 0) {
        out.push_back({name, name + "_" + std::to_string(i) + " is negative"});
      } else {
        CheckUnitInterval(c[i], name + "_" + std::to_string(i), options, &out);
      }
    }
  }
  CheckPrior(instance.prior, &out);
  return out;
}

std::vector<Violation> Validate(const SingleParamInstance& instance,
                                const ValidationOptions& options) {
  std::vector<Violation> out;
  const int m = instance.num_outcomes();
  const int n = instance.num_actions();
  const int K = instance.num_types();
  if (m == 0) out.push_back({"rewards", "no outcomes"});
  if (n == 0) out.push_back({"transitions", "no actions"});
  if (K == 0) out.push_back({"prior", "no types"});
  if (static_cast<int>(instance.types.size()) != K) {
    out.push_back({"types", "expected one type value per prior entry"});
  }
  if (static_cast<int>(instance.unit_costs.size()) != n) {
    out.push_back({"costs", "expected one unit cost per action"});
  }
  for (int j = 0; j < m; ++j) {
    CheckUnitInterval(instance.rewards[j], "reward " + std::to_string(j), options, &out);
  }
  CheckStochastic(instance.transitions, m, "F", &out);
  bool has_opt_out = false;
  for (size_t i = 0; i < instance.unit_costs.size(); ++i) {
    const Rational& c = instance.unit_costs[i];
    if (c < 0) {
      out.push_back({"costs", "c_" + std::to_string(i) + " is negative"});
    } else {
      CheckUnitInterval(c, "c_" + std::to_string(i), options, &out);
    }
    if (c == 0) has_opt_out = true;
  }
  if (!has_opt_out) out.push_back({"costs", "opt-out cost nonzero: no zero-cost action"});
  for (size_t k = 0; k < instance.types.size(); ++k) {
    if (instance.types[k] < 0) {
      out.push_back({"types", "type " + std::to_string(k) + " is negative"});
    }
    if (k > 0 && instance.types[k] <= instance.types[k - 1]) {
      out.push_back({"types", "types not strictly increasing at index " + std::to_string(k)});
    }
  }
  CheckPrior(instance.prior, &out);
  return out;
}

bool HasErrors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return !v.warning; });
}

void CheckMenuShape(const InstanceView& view, const Menu& menu) {
  if (menu.num_types() != view.K() || static_cast<int>(menu.actions.size()) != view.K()) {
    throw DimensionError("menu has " + std::to_string(menu.contracts.size()) +
                         " contracts for " + std::to_string(view.K()) + " types");
  }
  for (int k = 0; k < view.K(); ++k) {
    if (static_cast<int>(menu.contracts[k].payments.size()) != view.m()) {
      throw DimensionError("contract " + std::to_string(k) + " has wrong length");
    }
    if (menu.actions[k] < 0 || menu.actions[k] >= view.n()) {
      throw DimensionError("recommended action of type " + std::to_string(k) +
                           " out of range");
    }
  }
}

Rational TypePrincipalUtility(const InstanceView& view, int type, const Vector& payments,
                              int action) {
  return Dot(view.F(type)[action], Sub(view.rewards(), payments));
}

Rational AgentUtility(const InstanceView& view, int type, const Vector& payments,
                      int action) {
  if (type < 0 || type >= view.K() || action < 0 || action >= view.n()) {
    throw DimensionError("type or action index out of range");
  }
  return Dot(view.F(type)[action], payments) - view.cost(type, action);
}

Rational PrincipalUtility(const InstanceView& view, const Menu& menu) {
  CheckMenuShape(view, menu);
  Rational total = 0;
  for (int k = 0; k < view.K(); ++k) {
    total += view.prior()[k] *
             TypePrincipalUtility(view, k, menu.contracts[k].payments, menu.actions[k]);
  }
  return total;
}

Rational RandomizedPrincipalUtility(const InstanceView& view, const RandomizedMenu& menu) {
  Rational total = 0;
  for (int k = 0; k < view.K(); ++k) {
    for (int i = 0; i < view.n(); ++i) {
      const Rational& pi = menu.probabilities[k][i];
      if (sgn(pi) == 0) continue;
      total += view.prior()[k] * pi *
               TypePrincipalUtility(view, k, menu.contracts[k][i], i);
    }
  }
  return total;
}

Menu ZeroMenu(const InstanceView& view, int opt_out_action) {
  Menu menu;
  menu.contracts.assign(view.K(), Contract{Zeros(view.m()), true});
  menu.actions.assign(view.K(), opt_out_action);
  return menu;
}

int OptOutAction(const InstanceView& view, int type) {
  for (int i = 0; i < view.n(); ++i) {
    if (sgn(view.cost(type, i)) == 0) return i;
  }
  return -1;
}

}  // namespace bcd
