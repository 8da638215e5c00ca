// SPDX-License-Identifier: Apache-2.0
//
// Optimal single contracts without limited liability when the transition
// matrix has full row rank.
//
// The principal allocates actions by maximizing virtual welfare
// R_a - c_a * phi(theta), with phi ironed into a non-decreasing sequence.
// Expected payments follow from binding adjacent IC constraints, and a single
// contract reproducing them is found by solving F p = T.

#ifndef BCD_UNRESTRICTED_H_
#define BCD_UNRESTRICTED_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "bcd/instance.h"
#include "bcd/solvers.h"

namespace bcd {

enum class IroningMode {
  kMassWeighted,   // envelope over (cumulative prior, cumulative mu * phi)
  kIndexWeighted,  // envelope over (k, cumulative phi)
};

struct VirtualCostTable {
  Vector phi;
  Vector ironed;
  Vector cumulative_mass;  // M(theta_k), k = 1..K
};

// Un-ironed table; `ironed` is a copy of `phi`.
VirtualCostTable VirtualCosts(const SingleParamInstance& instance);

VirtualCostTable Iron(const VirtualCostTable& table, const Vector& prior,
                      IroningMode mode = IroningMode::kMassWeighted);

struct AllocationPlan {
  std::vector<int> actions;  // a(theta_k)
  Vector z;                  // expected payment per type
  Vector T;                  // expected payment per action, 0 if unallocated
  Vector virtual_costs;      // the (ironed) costs used for the allocation
  int rank = 0;
  bool monotone = true;
};

AllocationPlan MaximizeVirtualWelfare(const SingleParamInstance& instance,
                                      IroningMode mode = IroningMode::kMassWeighted);

// Expected payments from the binding-IC recursion for a given allocation.
Vector RecursionPayments(const SingleParamInstance& instance, const std::vector<int>& actions);

class RankDeficient : public std::runtime_error {
 public:
  RankDeficient(const std::string& what, std::vector<int> dependent_rows)
      : std::runtime_error(what), dependent_rows_(std::move(dependent_rows)) {}
  const std::vector<int>& dependent_rows() const { return dependent_rows_; }

 private:
  std::vector<int> dependent_rows_;
};

// Rank by exact elimination; rows that reduce to zero are reported.
int MatrixRank(const Matrix& F, std::vector<int>* dependent_rows = nullptr);

// Solves F p = T with free variables fixed at zero. Throws RankDeficient.
Contract SingleContractFromPlan(const SingleParamInstance& instance, const AllocationPlan& plan);

struct UnrestrictedDiagnostics {
  bool best_responses_match = true;
  bool individually_rational = true;
  bool welfare_identity = true;
  bool dominates_randomized = true;
  bool randomized_checked = false;
  Rational virtual_welfare;
  Rational randomized_value;
  std::vector<std::string> messages;

  bool ok() const {
    return best_responses_match && individually_rational && welfare_identity &&
           dominates_randomized;
  }
};

struct UnrestrictedOptions {
  IroningMode ironing = IroningMode::kMassWeighted;
  // Also solve the randomized-menu program with limited liability and check
  // that it does not beat the unrestricted contract.
  bool compare_randomized = true;
};

SolveReport SolveUnrestricted(const SingleParamInstance& instance,
                              const UnrestrictedOptions& options = {},
                              UnrestrictedDiagnostics* diagnostics = nullptr);

}  // namespace bcd

#endif  // BCD_UNRESTRICTED_H_
