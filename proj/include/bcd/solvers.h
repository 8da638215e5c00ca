// SPDX-License-Identifier: Apache-2.0
//
// Exact optimal contracts.
//
// Menus and single contracts are found by enumerating every action profile
// (one recommended action per type) and solving the linear program that
// incentivizes it. Randomized menus are solved through the standard
// z = pi * p relaxation, which is a single linear program.

#ifndef BCD_SOLVERS_H_
#define BCD_SOLVERS_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcd/agent.h"
#include "bcd/instance.h"
#include "bcd/lp.h"

namespace bcd {

using ActionProfile = std::vector<int>;

inline constexpr int64_t kDefaultLpBudget = 100000;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  int64_t lp_budget = kDefaultLpBudget;
  int workers = 1;
  // Off makes payments free and adds a participation row per type.
  bool limited_liability = true;
};

struct ProfileSolution {
  LpResult lp;
  LinearProgram program;
  Rational value;  // principal utility, including the constant reward term
  Menu menu;       // set when lp.status is kOptimal
};

struct SolveReport {
  std::string kind;  // "menu", "single", "randomized" or "unrestricted"
  Rational objective;
  Menu menu;  // for "single" every contract is the same
  std::optional<RandomizedMenu> randomized;
  ActionProfile profile;
  Vector agent_utility;      // per type, honest and obedient
  Vector principal_utility;  // per type, not weighted by the prior
  IcCertificate certificate;
  int64_t lps_solved = 0;
  int64_t infeasible_profiles = 0;
  // Every optimal LP solved along the way passed its duality check.
  bool duality_checked = true;
};

// Builds and solves the profile LP. With single_contract set, one payment
// vector is shared by all types and only obedience constraints remain.
ProfileSolution SolveMenuForProfile(const InstanceView& view, const ActionProfile& profile,
                                    bool single_contract = false,
                                    const SolverOptions& options = {});

SolveReport SolveOptimalMenu(const InstanceView& view, const SolverOptions& options = {});
SolveReport SolveOptimalSingle(const InstanceView& view, const SolverOptions& options = {});

// Raw solution of the relaxed randomized-menu program.
struct RandomizedSolution {
  LpResult lp;
  LinearProgram program;
  Rational value;
  std::vector<std::vector<Vector>> z;  // K x n x m
  std::vector<Vector> pi;              // K x n
};

RandomizedSolution SolveRandomizedProgram(const SingleParamInstance& instance,
                                          bool limited_liability = true);

SolveReport SolveRandomizedMenu(const SingleParamInstance& instance,
                                const SolverOptions& options = {});

// Objective of the relaxed program at (z, pi).
Rational RandomizedObjective(const InstanceView& view, const std::vector<std::vector<Vector>>& z,
                             const std::vector<Vector>& pi);

// Checks every constraint of the relaxed program at (z, pi) exactly, with the
// inner max evaluated directly rather than through epigraph variables.
bool CheckRandomizedFeasibility(const InstanceView& view,
                                const std::vector<std::vector<Vector>>& z,
                                const std::vector<Vector>& pi, bool limited_liability,
                                std::string* why = nullptr);

// Turns (z, pi) into contracts: p = z / pi plus a constant correction for the
// irregular entries (pi = 0 but z != 0), whose contracts are set to zero.
RandomizedMenu RecoverRandomizedContracts(const InstanceView& view,
                                          const std::vector<std::vector<Vector>>& z,
                                          const std::vector<Vector>& pi);

// Honest utility of type k and the utility of type k reporting k' when the
// agent best-responds to every drawn contract.
Rational RandomizedAgentUtility(const InstanceView& view, const RandomizedMenu& menu, int type);
Rational RandomizedMisreportUtility(const InstanceView& view, const RandomizedMenu& menu,
                                    int type, int reported);

// Fills per-type utilities and the IC certificate of a deterministic menu.
void FillMenuReport(const InstanceView& view, SolveReport* report);

// Number of profiles n^K, saturating at INT64_MAX.
int64_t ProfileCount(int n, int K);

}  // namespace bcd

#endif  // BCD_SOLVERS_H_
