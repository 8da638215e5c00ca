// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the test suites: seeded random instances with small
// denominators, the two-action instance I0, and brute-force oracles that do
// not go through the library's solvers.

#ifndef BCD_TESTS_TESTING_H_
#define BCD_TESTS_TESTING_H_

#include <cstdint>
#include <random>
#include <vector>

#include "bcd/instance.h"
#include "bcd/reduction.h"

namespace bcd::testing {

using Rng = std::mt19937_64;

// Uniform k / d with d in [1, max_den] and 0 <= k <= d.
Rational RandomUnit(Rng& rng, int max_den = 20);

// A probability vector whose entries share a denominator <= max_den. With
// strictly_positive every entry is at least 1 / den (needs size <= max_den).
Vector RandomDistribution(Rng& rng, int size, int max_den = 20, bool strictly_positive = false);

// Action 0 is a zero-cost opt-out in every type.
MultiParamInstance RandomMulti(Rng& rng, int n, int m, int K, int max_den = 20);

// Action 0 has zero cost; types are strictly increasing and positive.
SingleParamInstance RandomSingle(Rng& rng, int n, int m, int K, int max_den = 20);

// Like RandomSingle but the transition matrix has full row rank (m >= n).
SingleParamInstance RandomFullRankSingle(Rng& rng, int n, int m, int K, int max_den = 20);

// r = (0, 1), F_0 = (1, 0), F_1 = (0, 1), c = (0, 1), one type theta = 1/2.
SingleParamInstance MakeI0();

// The same instance written as a one-type multi-parameter instance.
MultiParamInstance MakeI0Multi();

// Two types over outcomes (w_0, w_1) with r = (0, 1/2). Action 0 yields w_0
// at zero cost; action 1 yields w_1 at cost 1 for type 1 and 0 for type 2.
// Uniform prior.
MultiParamInstance MakeTwoBlockMulti();

// Reduced-side menu for MakeTwoBlockMulti: both real types are offered 1/4 on
// w_1 and recommended action 1 of the second block; the extra type gets the
// zero contract and the dummy action. Type 1 thus plays outside its block.
Menu MakeTwoBlockMenu(const Reduction& reduction);

// Profile value by enumerating every vertex of the profile polytope, built
// here from the instance rather than through the library's LP. Returns false
// in *feasible when no vertex exists. Only for tiny instances.
Rational OracleProfileValue(const InstanceView& view, const std::vector<int>& profile,
                            bool single_contract, bool* feasible);

// Maximum of OracleProfileValue over all profiles.
Rational OracleOptimalValue(const InstanceView& view, bool single_contract);

// Best principal utility over monotone deterministic allocations with
// binding adjacent IC payments, enumerating every allocation.
Rational BruteForceUnrestricted(const SingleParamInstance& instance);

// Rank of a rational matrix by fraction-free elimination.
int OracleRank(const Matrix& a);

}  // namespace bcd::testing

#endif  // BCD_TESTS_TESTING_H_
