// SPDX-License-Identifier: Apache-2.0
//
// The single-parameter family on which menus beat the best single contract by
// a factor linear in the number of actions.
//
// Outcomes are ordered (w_empty, w_plus, w_1, ..., w_nbar); actions are
// ordered (a_0, a_{1,1}, a_{1,2}, ..., a_{nbar,1}, a_{nbar,2}).

#ifndef BCD_GAP_H_
#define BCD_GAP_H_

#include "bcd/instance.h"

namespace bcd {

struct GapParams {
  int n = 0;       // number of actions of the base family (odd)
  int n_bar = 0;   // (n - 1) / 2, also the number of types
  int64_t l = 0;   // 2 n^2
  Rational C;      // sum_i 2^{i n + i l}
  bool padded = false;  // a trivial action was appended to reach an even n
};

GapParams MakeGapParams(int n, bool pad_even = false);

// With pad_even, an even n builds the n - 1 family plus one extra zero-cost
// action that always yields w_empty.
SingleParamInstance BuildGapInstance(int n, bool pad_even = false,
                                     GapParams* gp = nullptr);

// Contract i pays 1 - 2^{-i n - 1} on w_i only and recommends a_{i,1}.
Menu BuildGapMenu(int n, bool pad_even = false);

int GapOutcomeOmega(int i);      // column of w_i, 1 <= i <= n_bar
int GapActionFirst(int i);       // row of a_{i,1}
int GapActionSecond(int i);      // row of a_{i,2}

}  // namespace bcd

#endif  // BCD_GAP_H_
