#include "bcd/lp.h"

#include <gtest/gtest.h>

#include "testing.h"

namespace bcd {
namespace {

Vector V(std::initializer_list<Rational> xs) { return Vector(xs); }

TEST(SolveLp, SingleBound) {
  LinearProgram lp;
  lp.objective = V({1});
  lp.AddConstraint(V({1}), Sense::kLessEqual, Rational(3, 7));
  LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.value, Rational(3, 7));
  EXPECT_EQ(r.solution, V({Rational(3, 7)}));
  std::string why;
  EXPECT_TRUE(CheckOptimalityCertificate(lp, r, &why)) << why;
}

TEST(SolveLp, Infeasible) {
  LinearProgram lp;
  lp.objective = V({1});
  lp.AddConstraint(V({1}), Sense::kGreaterEqual, Rational(1));
  lp.AddConstraint(V({1}), Sense::kLessEqual, Rational(0));
  EXPECT_EQ(SolveLp(lp).status, LpStatus::kInfeasible);
}

TEST(SolveLp, Unbounded) {
  LinearProgram lp;
  lp.objective = V({1, 1});
  lp.AddConstraint(V({1, -1}), Sense::kLessEqual, Rational(1));
  EXPECT_EQ(SolveLp(lp).status, LpStatus::kUnbounded);
}

TEST(SolveLp, I0MenuLp) {
  // Variables p_0, p_1; incentivize action 1 at theta = 1/2:
  // p_1 - 1/2 >= p_0. Objective 1 - p_1, written as -p_1 plus constant 1.
  LinearProgram lp;
  lp.objective = V({0, -1});
  lp.AddConstraint(V({-1, 1}), Sense::kGreaterEqual, Rational(1, 2));
  LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(1 + r.value, Rational(1, 2));
  EXPECT_EQ(r.solution, V({0, Rational(1, 2)}));
  EXPECT_TRUE(CheckOptimalityCertificate(lp, r));
}

TEST(SolveLp, EqualityAndFreeVariables) {
  // max x - y, x + y = 1, y free, x <= 3 => x = 3, y = -2, value 5.
  LinearProgram lp;
  lp.objective = V({1, -1});
  lp.free = {false, true};
  lp.AddConstraint(V({1, 1}), Sense::kEqual, Rational(1));
  lp.AddConstraint(V({1, 0}), Sense::kLessEqual, Rational(3));
  LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.value, Rational(5));
  EXPECT_EQ(r.solution, V({3, -2}));
  std::string why;
  EXPECT_TRUE(CheckOptimalityCertificate(lp, r, &why)) << why;
}

TEST(SolveLp, ZeroRowsAndRedundantEqualities) {
  LinearProgram lp;
  lp.objective = V({1, 2});
  lp.AddConstraint(V({0, 0}), Sense::kLessEqual, Rational(0));
  lp.AddConstraint(V({1, 1}), Sense::kEqual, Rational(2));
  lp.AddConstraint(V({2, 2}), Sense::kEqual, Rational(4));
  LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.value, Rational(4));
  EXPECT_TRUE(CheckOptimalityCertificate(lp, r));
}

// Brute-force vertex enumeration for small max c.x, Ax <= b, x >= 0.
Rational VertexOptimum(const LinearProgram& lp, bool* feasible) {
  const int n = lp.num_variables();
  Matrix G;
  Vector h;
  for (const Constraint& c : lp.constraints) {
    G.push_back(c.coefficients);
    h.push_back(c.rhs);
  }
  for (int j = 0; j < n; ++j) {
    Vector e(n);
    e[j] = -1;
    G.push_back(e);
    h.push_back(0);
  }
  const int rows = static_cast<int>(G.size());
  *feasible = false;
  Rational best;
  for (int mask = 0; mask < (1 << rows); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    Matrix a;
    Vector b;
    for (int r = 0; r < rows; ++r) {
      if (mask & (1 << r)) {
        a.push_back(G[r]);
        b.push_back(h[r]);
      }
    }
    // Gauss-Jordan on the square system.
    bool singular = false;
    for (int col = 0; col < n && !singular; ++col) {
      int piv = col;
      while (piv < n && a[piv][col] == 0) ++piv;
      if (piv == n) {
        singular = true;
        break;
      }
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
      for (int r = 0; r < n; ++r) {
        if (r == col || a[r][col] == 0) continue;
        Rational f = a[r][col] / a[col][col];
        for (int j = 0; j < n; ++j) a[r][j] -= f * a[col][j];
        b[r] -= f * b[col];
      }
    }
    if (singular) continue;
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    bool ok = true;
    for (int r = 0; r < rows && ok; ++r) ok = Dot(G[r], x) <= h[r];
    if (!ok) continue;
    Rational v = Dot(lp.objective, x);
    if (!*feasible || v > best) best = v;
    *feasible = true;
  }
  return best;
}

LinearProgram KleeMinty3() {
  // Degenerate variant: a duplicated tight constraint at the origin.
  LinearProgram lp;
  lp.objective = V({4, 2, 1});
  lp.AddConstraint(V({1, 0, 0}), Sense::kLessEqual, Rational(5));
  lp.AddConstraint(V({4, 1, 0}), Sense::kLessEqual, Rational(25));
  lp.AddConstraint(V({8, 4, 1}), Sense::kLessEqual, Rational(125));
  lp.AddConstraint(V({1, -1, 0}), Sense::kLessEqual, Rational(0));
  lp.AddConstraint(V({1, -1, 1}), Sense::kLessEqual, Rational(0));
  lp.AddConstraint(V({2, -2, 0}), Sense::kLessEqual, Rational(0));
  return lp;
}

TEST(SolveLp, DegenerateKleeMintyTerminates) {
  LinearProgram lp = KleeMinty3();
  LpResult r = SolveLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_LE(r.pivots, 50);
  EXPECT_TRUE(CheckOptimalityCertificate(lp, r));
  bool feasible = false;
  EXPECT_EQ(r.value, VertexOptimum(lp, &feasible));
}

TEST(SolveLp, PivotBudgetIsEnforced) {
  LpOptions o;
  o.max_pivots = 0;
  EXPECT_THROW(SolveLp(KleeMinty3(), o), std::runtime_error);
}

TEST(SolveLp, Deterministic) {
  LinearProgram lp = KleeMinty3();
  LpResult a = SolveLp(lp);
  LpResult b = SolveLp(lp);
  EXPECT_EQ(a.solution, b.solution);
  EXPECT_EQ(a.dual, b.dual);
  EXPECT_EQ(a.pivots, b.pivots);
}

TEST(SolveLp, MatchesVertexEnumerationOnRandomBoundedPrograms) {
  testing::Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    LinearProgram lp;
    const int n = 2 + t % 2;
    for (int j = 0; j < n; ++j) lp.objective.push_back(testing::RandomUnit(rng) - Rational(1, 3));
    for (int r = 0; r < 3; ++r) {
      Vector row;
      for (int j = 0; j < n; ++j) row.push_back(testing::RandomUnit(rng) - Rational(1, 4));
      lp.AddConstraint(row, Sense::kLessEqual, testing::RandomUnit(rng) - Rational(1, 5));
    }
    // Box keeps it bounded.
    Vector ones(n, Rational(1));
    lp.AddConstraint(ones, Sense::kLessEqual, Rational(2));
    bool feasible = false;
    Rational expected = VertexOptimum(lp, &feasible);
    LpResult r = SolveLp(lp);
    if (!feasible) {
      EXPECT_EQ(r.status, LpStatus::kInfeasible);
      continue;
    }
    ASSERT_EQ(r.status, LpStatus::kOptimal);
    EXPECT_EQ(r.value, expected);
    EXPECT_EQ(Dot(lp.objective, r.solution), r.value);
    std::string why;
    EXPECT_TRUE(CheckOptimalityCertificate(lp, r, &why)) << why;
  }
}

TEST(CheckOptimalityCertificate, DetectsTampering) {
  LinearProgram lp = KleeMinty3();
  LpResult r = SolveLp(lp);
  r.value += 1;
  EXPECT_FALSE(CheckOptimalityCertificate(lp, r));
  r = SolveLp(lp);
  r.solution[0] += 100;
  EXPECT_FALSE(CheckOptimalityCertificate(lp, r));
}

}  // namespace
}  // namespace bcd
