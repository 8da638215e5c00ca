// SPDX-License-Identifier: Apache-2.0
//
// Instance and solution data model shared by every module.
//
// A multi-parameter instance gives each type its own transition matrix and
// cost vector. A single-parameter instance shares one transition matrix and
// one unit-cost vector; type theta pays theta * c_i for action i. Both can be
// read through InstanceView, which exposes the per-type matrices and costs
// uniformly so that the agent and solver code is written once.

#ifndef BCD_INSTANCE_H_
#define BCD_INSTANCE_H_

#include <string>
#include <vector>

#include "bcd/rational.h"

namespace bcd {

struct MultiParamInstance {
  Vector rewards;                        // length m
  std::vector<std::string> type_labels;  // length K
  std::vector<Matrix> transitions;       // K matrices of shape n x m
  std::vector<Vector> costs;             // K vectors of length n
  Vector prior;                          // length K

  int num_outcomes() const { return static_cast<int>(rewards.size()); }
  int num_actions() const {
    return transitions.empty() ? 0 : static_cast<int>(transitions[0].size());
  }
  int num_types() const { return static_cast<int>(prior.size()); }
};

struct SingleParamInstance {
  Vector rewards;      // length m
  Matrix transitions;  // n x m
  Vector unit_costs;   // length n
  Vector types;        // strictly increasing, length K
  Vector prior;        // length K

  int num_outcomes() const { return static_cast<int>(rewards.size()); }
  int num_actions() const { return static_cast<int>(transitions.size()); }
  int num_types() const { return static_cast<int>(prior.size()); }
};

struct Contract {
  Vector payments;
  bool limited_liability = true;
};

struct Menu {
  std::vector<Contract> contracts;  // one per type
  std::vector<int> actions;         // recommended action per type

  int num_types() const { return static_cast<int>(contracts.size()); }
  bool IsSingleContract() const;
};

// Menu of randomized contracts: type theta draws action i with probability
// probabilities[theta][i] and is then offered contracts[theta][i].
struct RandomizedMenu {
  std::vector<Vector> probabilities;       // K x n
  std::vector<std::vector<Vector>> contracts;  // K x n x m
};

// Read-only uniform access to either instance kind. Holds pointers into the
// instance it was built from, so it must not outlive it.
class InstanceView {
 public:
  InstanceView(const MultiParamInstance& instance);   // NOLINT
  InstanceView(const SingleParamInstance& instance);  // NOLINT

  int m() const { return m_; }
  int n() const { return n_; }
  int K() const { return k_; }
  bool single_parameter() const { return single_parameter_; }

  const Vector& rewards() const { return *rewards_; }
  const Vector& prior() const { return *prior_; }
  const Matrix& F(int type) const { return *transitions_[type]; }
  const Vector& costs(int type) const { return costs_[type]; }
  const Rational& cost(int type, int action) const { return costs_[type][action]; }

 private:
  int m_ = 0;
  int n_ = 0;
  int k_ = 0;
  bool single_parameter_ = false;
  const Vector* rewards_ = nullptr;
  const Vector* prior_ = nullptr;
  std::vector<const Matrix*> transitions_;
  std::vector<Vector> costs_;
};

struct Violation {
  std::string field;
  std::string message;
  bool warning = false;  // out-of-range values are warnings, not errors
};

struct ValidationOptions {
  // Report rewards or costs outside [0, 1] as warnings. Off relaxes the check.
  bool check_unit_bounds = true;
};

std::vector<Violation> Validate(const MultiParamInstance& instance,
                                const ValidationOptions& options = {});
std::vector<Violation> Validate(const SingleParamInstance& instance,
                                const ValidationOptions& options = {});
bool HasErrors(const std::vector<Violation>& violations);

// Throws DimensionError unless the menu has one contract of length m and one
// action in range per type.
void CheckMenuShape(const InstanceView& view, const Menu& menu);

// Sum over types of mu(theta) <F^theta_{a(theta)}, r - p^theta>.
Rational PrincipalUtility(const InstanceView& view, const Menu& menu);

// mu-free contribution <F^theta_a, r - p> of one type.
Rational TypePrincipalUtility(const InstanceView& view, int type, const Vector& payments,
                              int action);

// <F^theta_a, p> - c^theta_a; for single-parameter instances the cost is theta * c_a.
Rational AgentUtility(const InstanceView& view, int type, const Vector& payments,
                      int action);

Rational RandomizedPrincipalUtility(const InstanceView& view, const RandomizedMenu& menu);

Menu ZeroMenu(const InstanceView& view, int opt_out_action);

// Index of a zero-cost action for the type (the opt-out), or -1.
int OptOutAction(const InstanceView& view, int type);

}  // namespace bcd

#endif  // BCD_INSTANCE_H_
