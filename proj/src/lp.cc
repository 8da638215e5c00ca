// SPDX-License-Identifier: Apache-2.0

#include "bcd/lp.h"

#include <stdexcept>

namespace bcd {
namespace {

// Dense tableau in the standard form  T x = b, x >= 0, with an explicit basis.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : T_(rows, Vector(cols)), b_(rows), d_(cols), basic_(rows, -1),
        artificial_(cols, false) {}

  int rows() const { return static_cast<int>(T_.size()); }
  int cols() const { return static_cast<int>(d_.size()); }

  Rational& at(int r, int c) { return T_[r][c]; }
  Rational& rhs(int r) { return b_[r]; }
  int& basic(int r) { return basic_[r]; }
  void set_artificial(int c) { artificial_[c] = true; }
  bool artificial(int c) const { return artificial_[c]; }
  const Rational& reduced_cost(int c) const { return d_[c]; }

  // Reduced costs d_c = cost_c - sum_r cost_{basic(r)} T[r][c].
  void Price(const Vector& cost) {
    for (int c = 0; c < cols(); ++c) d_[c] = cost[c];
    for (int r = 0; r < rows(); ++r) {
      const Rational& cb = cost[basic_[r]];
      if (sgn(cb) == 0) continue;
      for (int c = 0; c < cols(); ++c) {
        if (sgn(T_[r][c]) != 0) d_[c] -= cb * T_[r][c];
      }
    }
  }

  // Bland's rule. Returns false at optimality; sets *unbounded if the
  // entering column has no positive entry.
  bool Step(bool allow_artificial, bool* unbounded) {
    int enter = -1;
    for (int c = 0; c < cols(); ++c) {
      if (!allow_artificial && artificial_[c]) continue;
      if (sgn(d_[c]) > 0) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return false;
    int leave = -1;
    Rational best;
    for (int r = 0; r < rows(); ++r) {
      if (sgn(T_[r][enter]) <= 0) continue;
      Rational ratio = b_[r] / T_[r][enter];
      if (leave < 0 || ratio < best || (ratio == best && basic_[r] < basic_[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) {
      *unbounded = true;
      return false;
    }
    Pivot(leave, enter);
    return true;
  }

  void Pivot(int pr, int pc) {
    Rational inv = 1 / T_[pr][pc];
    std::vector<int> nz;
    for (int c = 0; c < cols(); ++c) {
      if (sgn(T_[pr][c]) != 0) {
        T_[pr][c] *= inv;
        nz.push_back(c);
      }
    }
    b_[pr] *= inv;
    auto eliminate = [&](Vector& row, Rational* rhs) {
      Rational f = row[pc];
      if (sgn(f) == 0) return;
      for (int c : nz) row[c] -= f * T_[pr][c];
      if (rhs != nullptr) *rhs -= f * b_[pr];
    };
    for (int r = 0; r < rows(); ++r) {
      if (r != pr) eliminate(T_[r], &b_[r]);
    }
    eliminate(d_, nullptr);
    basic_[pr] = pc;
  }

 private:
  Matrix T_;
  Vector b_;
  Vector d_;
  std::vector<int> basic_;
  std::vector<bool> artificial_;
};

bool Satisfies(const Rational& lhs, Sense sense, const Rational& rhs) {
  switch (sense) {
    case Sense::kLessEqual:
      return lhs <= rhs;
    case Sense::kEqual:
      return lhs == rhs;
    case Sense::kGreaterEqual:
      return lhs >= rhs;
  }
  return false;
}

}  // namespace

void LinearProgram::AddConstraint(Vector coefficients, Sense sense, Rational rhs) {
  constraints.push_back({std::move(coefficients), sense, std::move(rhs)});
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

LpResult SolveLp(const LinearProgram& lp, const LpOptions& options) {
  const int nv = lp.num_variables();
  std::vector<bool> is_free = lp.free;
  is_free.resize(nv, false);
  for (const Constraint& con : lp.constraints) {
    if (static_cast<int>(con.coefficients.size()) != nv) {
      throw DimensionError("constraint length does not match variable count");
    }
  }

  LpResult result;

  // Drop identically-zero rows after checking them; normalize the rest to a
  // non-negative right-hand side.
  struct Row {
    int source;
    bool negated;
    Sense sense;
  };
  std::vector<Row> rows;
  for (int i = 0; i < static_cast<int>(lp.constraints.size()); ++i) {
    const Constraint& con = lp.constraints[i];
    if (IsZero(con.coefficients)) {
      if (!Satisfies(Rational(0), con.sense, con.rhs)) {
        result.status = LpStatus::kInfeasible;
        return result;
      }
      continue;
    }
    bool neg = sgn(con.rhs) < 0;
    Sense s = con.sense;
    if (neg && s == Sense::kLessEqual) {
      s = Sense::kGreaterEqual;
    } else if (neg && s == Sense::kGreaterEqual) {
      s = Sense::kLessEqual;
    }
    rows.push_back({i, neg, s});
  }

  // Column layout: structural (+ negative parts of free variables), then per
  // row an identity column (slack or artificial), then surplus columns.
  std::vector<int> pos_col(nv), neg_col(nv, -1);
  int cols = 0;
  for (int j = 0; j < nv; ++j) {
    pos_col[j] = cols++;
    if (is_free[j]) neg_col[j] = cols++;
  }
  const int R = static_cast<int>(rows.size());
  std::vector<int> id_col(R), surplus_col(R, -1);
  for (int r = 0; r < R; ++r) id_col[r] = cols++;
  for (int r = 0; r < R; ++r) {
    if (rows[r].sense == Sense::kGreaterEqual) surplus_col[r] = cols++;
  }

  Tableau tab(R, cols);
  for (int r = 0; r < R; ++r) {
    const Constraint& con = lp.constraints[rows[r].source];
    const int sign = rows[r].negated ? -1 : 1;
    for (int j = 0; j < nv; ++j) {
      if (sgn(con.coefficients[j]) == 0) continue;
      Rational a = con.coefficients[j];
      if (sign < 0) a = -a;
      tab.at(r, pos_col[j]) = a;
      if (neg_col[j] >= 0) tab.at(r, neg_col[j]) = -a;
    }
    tab.rhs(r) = sign < 0 ? Rational(-con.rhs) : con.rhs;
    tab.at(r, id_col[r]) = 1;
    if (surplus_col[r] >= 0) tab.at(r, surplus_col[r]) = -1;
    if (rows[r].sense != Sense::kLessEqual) tab.set_artificial(id_col[r]);
    tab.basic(r) = id_col[r];
  }

  int64_t pivots = 0;
  bool unbounded = false;
  auto run = [&](bool allow_artificial) {
    while (tab.Step(allow_artificial, &unbounded)) {
      if (++pivots > options.max_pivots) {
        throw std::runtime_error("simplex pivot limit exceeded");
      }
    }
  };

  // Phase 1: maximize minus the sum of artificials.
  bool any_artificial = false;
  Vector cost1(cols);
  for (int c = 0; c < cols; ++c) {
    if (tab.artificial(c)) {
      cost1[c] = -1;
      any_artificial = true;
    }
  }
  if (any_artificial) {
    tab.Price(cost1);
    run(true);
    Rational infeasibility = 0;
    for (int r = 0; r < R; ++r) {
      if (tab.artificial(tab.basic(r))) infeasibility += tab.rhs(r);
    }
    if (sgn(infeasibility) != 0) {
      result.status = LpStatus::kInfeasible;
      result.pivots = pivots;
      return result;
    }
    // Drive zero-valued artificials out of the basis where possible; rows
    // where that fails are redundant and stay inert.
    for (int r = 0; r < R; ++r) {
      if (!tab.artificial(tab.basic(r))) continue;
      for (int c = 0; c < cols; ++c) {
        if (!tab.artificial(c) && sgn(tab.at(r, c)) != 0) {
          tab.Pivot(r, c);
          ++pivots;
          break;
        }
      }
    }
  }

  // Phase 2.
  Vector cost2(cols);
  for (int j = 0; j < nv; ++j) {
    cost2[pos_col[j]] = lp.objective[j];
    if (neg_col[j] >= 0) cost2[neg_col[j]] = -lp.objective[j];
  }
  tab.Price(cost2);
  run(false);
  result.pivots = pivots;
  if (unbounded) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  Vector x(cols);
  for (int r = 0; r < R; ++r) x[tab.basic(r)] = tab.rhs(r);
  result.solution.assign(nv, Rational(0));
  for (int j = 0; j < nv; ++j) {
    result.solution[j] = x[pos_col[j]];
    if (neg_col[j] >= 0) result.solution[j] -= x[neg_col[j]];
  }
  result.value = Dot(lp.objective, result.solution);
  result.dual.assign(lp.constraints.size(), Rational(0));
  for (int r = 0; r < R; ++r) {
    Rational y = -tab.reduced_cost(id_col[r]);
    result.dual[rows[r].source] = rows[r].negated ? Rational(-y) : y;
  }
  result.status = LpStatus::kOptimal;
  return result;
}

bool CheckOptimalityCertificate(const LinearProgram& lp, const LpResult& result,
                                std::string* why) {
  auto fail = [why](const std::string& msg) {
    if (why != nullptr) *why = msg;
    return false;
  };
  if (result.status != LpStatus::kOptimal) return fail("not an optimal result");
  const int nv = lp.num_variables();
  const int nc = static_cast<int>(lp.constraints.size());
  if (static_cast<int>(result.solution.size()) != nv ||
      static_cast<int>(result.dual.size()) != nc) {
    return fail("certificate has wrong dimensions");
  }
  for (int j = 0; j < nv; ++j) {
    bool is_free = j < static_cast<int>(lp.free.size()) && lp.free[j];
    if (!is_free && sgn(result.solution[j]) < 0) {
      return fail("variable " + std::to_string(j) + " is negative");
    }
  }
  Rational dual_value = 0;
  Vector aty(nv);
  for (int i = 0; i < nc; ++i) {
    const Constraint& con = lp.constraints[i];
    const Rational& y = result.dual[i];
    if (!Satisfies(Dot(con.coefficients, result.solution), con.sense, con.rhs)) {
      return fail("constraint " + std::to_string(i) + " violated by the primal point");
    }
    if ((con.sense == Sense::kLessEqual && sgn(y) < 0) ||
        (con.sense == Sense::kGreaterEqual && sgn(y) > 0)) {
      return fail("dual multiplier " + std::to_string(i) + " has the wrong sign");
    }
    if (sgn(y) == 0) continue;
    dual_value += con.rhs * y;
    for (int j = 0; j < nv; ++j) {
      if (sgn(con.coefficients[j]) != 0) aty[j] += con.coefficients[j] * y;
    }
  }
  for (int j = 0; j < nv; ++j) {
    bool is_free = j < static_cast<int>(lp.free.size()) && lp.free[j];
    if (is_free ? aty[j] != lp.objective[j] : aty[j] < lp.objective[j]) {
      return fail("dual constraint for variable " + std::to_string(j) + " violated");
    }
  }
  Rational primal = Dot(lp.objective, result.solution);
  if (primal != result.value) return fail("reported value differs from c . x");
  if (dual_value != primal) {
    return fail("duality gap " + ToString(primal - dual_value) + " is not zero");
  }
  return true;
}

}  // namespace bcd
