// SPDX-License-Identifier: Apache-2.0
//
// Multi-parameter to single-parameter reduction.
//
// Type k's actions become a block of rows whose outcome probabilities are
// scaled by 2^{-kl}; the leftover mass goes to a zero-reward dummy outcome.
// A zero-cost dummy action and a very costly extra type complete the
// construction. Single-parameter types are 2^{kl}, so a type's own block is
// the one whose scaled costs it can afford.

#ifndef BCD_REDUCTION_H_
#define BCD_REDUCTION_H_

#include <cstdint>
#include <vector>

#include "bcd/instance.h"

namespace bcd {

struct ReductionParams {
  Rational epsilon;
  int64_t l = 0;
  Rational alpha;
  Rational H;
  Rational mu_min;
};

struct ReductionMap {
  int n = 0;  // actions per type in the multi-parameter instance
  int m = 0;  // outcomes in the multi-parameter instance
  int K = 0;  // types in the multi-parameter instance
  ReductionParams params;
  int dummy_action = -1;   // row of the dummy action, n K
  int dummy_outcome = -1;  // column of the dummy outcome, m
  int extra_type = -1;     // index of the extra type, K
  Rational extra_type_value;  // 2^{2Kl+1} / epsilon
  Vector type_values;         // 2^{kl}, k = 1..K

  // Row of action i of type k (both zero-based).
  int Row(int k, int i) const { return k * n + i; }
  // Block (type index) of a row, or -1 for the dummy action.
  int Block(int row) const { return row == dummy_action ? -1 : row / n; }
  int ActionInBlock(int row) const { return row % n; }
};

// l is one more than the smallest non-negative integer with
// 2^l * mu_min * epsilon > 4, raised further if needed so that the extra type
// stays above type K. alpha = 1 / (2^{(K+1)l} + 1).
ReductionParams ChooseParameters(const MultiParamInstance& instance, const Rational& epsilon);

struct Reduction {
  SingleParamInstance instance;
  ReductionMap map;
};

Reduction Reduce(const MultiParamInstance& instance, const Rational& epsilon);

struct RegularityReport {
  bool regular = true;
  Vector virtual_costs;
};

// Discrete virtual costs phi(theta_k) and whether they are non-decreasing.
RegularityReport CheckRegularity(const SingleParamInstance& instance);

// epsilon(xi) = (2^{-tau} xi / 10)^2, a perfect square by construction.
Rational EpsilonForAccuracy(const Rational& xi, int64_t tau);

// Default tau: total bit length of every number in the instance. A heuristic
// stand-in for the unspecified polynomial bound.
int64_t DefaultTau(const MultiParamInstance& instance);

}  // namespace bcd

#endif  // BCD_REDUCTION_H_
