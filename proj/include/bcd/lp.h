// SPDX-License-Identifier: Apache-2.0
//
// Exact rational linear programming: a dense two-phase primal simplex with
// Bland's pivoting rule. Intended for desk-scale programs where exactness and
// reproducibility matter more than speed.

#ifndef BCD_LP_H_
#define BCD_LP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "bcd/rational.h"

namespace bcd {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Constraint {
  Vector coefficients;
  Sense sense = Sense::kLessEqual;
  Rational rhs;
};

// maximize objective . x subject to the constraints; variable j is >= 0
// unless free[j] is set.
struct LinearProgram {
  Vector objective;
  std::vector<Constraint> constraints;
  std::vector<bool> free;

  int num_variables() const { return static_cast<int>(objective.size()); }
  void AddConstraint(Vector coefficients, Sense sense, Rational rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rational value;
  Vector solution;
  // One multiplier per constraint, read off the final tableau. Only set when
  // status is kOptimal.
  Vector dual;
  int64_t pivots = 0;
};

struct LpOptions {
  // Safety net only; Bland's rule terminates on its own.
  int64_t max_pivots = 1000000;
};

LpResult SolveLp(const LinearProgram& lp, const LpOptions& options = {});

// Independent check of an optimal result against the original program: the
// primal point is feasible, the dual multipliers are sign-correct and dual
// feasible, and b . y equals the primal value. On failure writes a reason.
bool CheckOptimalityCertificate(const LinearProgram& lp, const LpResult& result,
                                std::string* why = nullptr);

}  // namespace bcd

#endif  // BCD_LP_H_
