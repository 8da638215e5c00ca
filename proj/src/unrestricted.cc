// SPDX-License-Identifier: Apache-2.0

#include "bcd/unrestricted.h"

#include <stdexcept>

#include "bcd/agent.h"

namespace bcd {
namespace {

struct Point {
  Rational x;
  Rational y;
};

// (a - o) x (b - o); positive for a counter-clockwise turn.
Rational Cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

VirtualCostTable VirtualCosts(const SingleParamInstance& instance) {
  const int K = instance.num_types();
  VirtualCostTable table;
  Rational mass = 0;
  Rational prev_theta = 0;
  for (int k = 0; k < K; ++k) {
    const Rational& theta = instance.types[k];
    if (k > 0 && theta <= prev_theta) {
      throw std::invalid_argument("types must be strictly increasing");
    }
    table.phi.push_back(theta + (theta - prev_theta) * mass / instance.prior[k]);
    mass += instance.prior[k];
    table.cumulative_mass.push_back(mass);
    prev_theta = theta;
  }
  table.ironed = table.phi;
  return table;
}

VirtualCostTable Iron(const VirtualCostTable& table, const Vector& prior, IroningMode mode) {
  const int K = static_cast<int>(table.phi.size());
  std::vector<Point> pts{{Rational(0), Rational(0)}};
  for (int k = 0; k < K; ++k) {
    const Point& last = pts.back();
    if (mode == IroningMode::kMassWeighted) {
      pts.push_back({last.x + prior[k], last.y + prior[k] * table.phi[k]});
    } else {
      pts.push_back({last.x + 1, last.y + table.phi[k]});
    }
  }
  // Lower convex hull; indices into pts.
  std::vector<int> hull;
  for (int i = 0; i <= K; ++i) {
    while (hull.size() >= 2 &&
           sgn(Cross(pts[hull[hull.size() - 2]], pts[hull.back()], pts[i])) <= 0) {
      hull.pop_back();
    }
    hull.push_back(i);
  }
  VirtualCostTable out = table;
  for (size_t s = 1; s < hull.size(); ++s) {
    const Point& a = pts[hull[s - 1]];
    const Point& b = pts[hull[s]];
    const Rational slope = (b.y - a.y) / (b.x - a.x);
    for (int k = hull[s - 1]; k < hull[s]; ++k) out.ironed[k] = slope;
  }
  return out;
}

Vector RecursionPayments(const SingleParamInstance& instance, const std::vector<int>& actions) {
  const int K = instance.num_types();
  Vector z(K);
  const Vector& c = instance.unit_costs;
  const Vector& theta = instance.types;
  z[K - 1] = theta[K - 1] * c[actions[K - 1]];
  for (int k = K - 2; k >= 0; --k) {
    z[k] = theta[k] * c[actions[k]] + z[k + 1] - theta[k] * c[actions[k + 1]];
  }
  return z;
}

AllocationPlan MaximizeVirtualWelfare(const SingleParamInstance& instance, IroningMode mode) {
  const int K = instance.num_types();
  const int n = instance.num_actions();
  VirtualCostTable table = Iron(VirtualCosts(instance), instance.prior, mode);
  AllocationPlan plan;
  plan.virtual_costs = table.ironed;
  Vector R(n);
  for (int a = 0; a < n; ++a) R[a] = Dot(instance.transitions[a], instance.rewards);
  const Vector& c = instance.unit_costs;
  for (int k = 0; k < K; ++k) {
    int best = -1;
    Rational best_value;
    for (int a = 0; a < n; ++a) {
      Rational v = R[a] - c[a] * table.ironed[k];
      if (best < 0 || v > best_value || (v == best_value && c[a] < c[best])) {
        best = a;
        best_value = v;
      }
    }
    plan.actions.push_back(best);
  }
  for (int k = 1; k < K; ++k) {
    if (c[plan.actions[k]] > c[plan.actions[k - 1]]) plan.monotone = false;
  }
  plan.z = RecursionPayments(instance, plan.actions);
  plan.T = Zeros(n);
  std::vector<bool> assigned(n, false);
  for (int k = 0; k < K; ++k) {
    const int a = plan.actions[k];
    if (assigned[a] && plan.T[a] != plan.z[k]) {
      throw std::logic_error("types sharing an action received different payments");
    }
    assigned[a] = true;
    plan.T[a] = plan.z[k];
  }
  plan.rank = MatrixRank(instance.transitions);
  return plan;
}

int MatrixRank(const Matrix& F, std::vector<int>* dependent_rows) {
  Matrix A = F;
  const int rows = static_cast<int>(A.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(A[0].size());
  std::vector<int> order(rows);
  for (int i = 0; i < rows; ++i) order[i] = i;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r) {
      if (sgn(A[r][col]) != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(A[rank], A[piv]);
    std::swap(order[rank], order[piv]);
    for (int r = rank + 1; r < rows; ++r) {
      if (sgn(A[r][col]) == 0) continue;
      Rational f = A[r][col] / A[rank][col];
      for (int j = col; j < cols; ++j) A[r][j] -= f * A[rank][j];
    }
    ++rank;
  }
  if (dependent_rows != nullptr) {
    dependent_rows->assign(order.begin() + rank, order.end());
  }
  return rank;
}

Contract SingleContractFromPlan(const SingleParamInstance& instance, const AllocationPlan& plan) {
  const int n = instance.num_actions();
  const int m = instance.num_outcomes();
  std::vector<int> dependent;
  if (MatrixRank(instance.transitions, &dependent) < n) {
    std::string rows;
    for (int r : dependent) rows += (rows.empty() ? "" : ", ") + std::to_string(r);
    throw RankDeficient("transition matrix is rank deficient; dependent rows: " + rows,
                        dependent);
  }
  // Reduced row echelon form of [F | T].
  Matrix A = instance.transitions;
  for (int i = 0; i < n; ++i) A[i].push_back(plan.T[i]);
  std::vector<int> pivot_col;
  int r = 0;
  for (int col = 0; col < m && r < n; ++col) {
    int piv = -1;
    for (int i = r; i < n; ++i) {
      if (sgn(A[i][col]) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(A[r], A[piv]);
    Rational inv = 1 / A[r][col];
    for (int j = col; j <= m; ++j) A[r][j] *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == r || sgn(A[i][col]) == 0) continue;
      Rational f = A[i][col];
      for (int j = col; j <= m; ++j) A[i][j] -= f * A[r][j];
    }
    pivot_col.push_back(col);
    ++r;
  }
  Contract contract{Zeros(m), false};
  for (int i = 0; i < r; ++i) contract.payments[pivot_col[i]] = A[i][m];
  return contract;
}

SolveReport SolveUnrestricted(const SingleParamInstance& instance,
                              const UnrestrictedOptions& options,
                              UnrestrictedDiagnostics* diagnostics) {
  const InstanceView view(instance);
  const int K = view.K();
  AllocationPlan plan = MaximizeVirtualWelfare(instance, options.ironing);
  Contract contract = SingleContractFromPlan(instance, plan);

  SolveReport report;
  report.kind = "unrestricted";
  report.menu.contracts.assign(K, contract);
  report.menu.actions = plan.actions;
  report.profile = plan.actions;
  report.objective = PrincipalUtility(view, report.menu);
  FillMenuReport(view, &report);

  UnrestrictedDiagnostics diag;
  for (int k = 0; k < K; ++k) {
    const int a = plan.actions[k];
    diag.virtual_welfare += instance.prior[k] *
                            (Dot(instance.transitions[a], instance.rewards) -
                             instance.unit_costs[a] * plan.virtual_costs[k]);
    BestResponse br = ComputeBestResponse(view, k, contract.payments);
    if (br.action != a && (br.agent_utility != report.agent_utility[k] ||
                           br.principal_utility != report.principal_utility[k])) {
      diag.best_responses_match = false;
      diag.messages.push_back("type " + std::to_string(k) + " best-responds with action " +
                              std::to_string(br.action) + " instead of " +
                              std::to_string(a));
    }
    if (sgn(report.agent_utility[k]) < 0) {
      diag.individually_rational = false;
      diag.messages.push_back("type " + std::to_string(k) + " has negative utility");
    }
  }
  if (diag.virtual_welfare != report.objective) {
    diag.welfare_identity = false;
    diag.messages.push_back("principal utility " + ToString(report.objective) +
                            " differs from virtual welfare " + ToString(diag.virtual_welfare));
  }
  if (options.compare_randomized) {
    SolveReport randomized = SolveRandomizedMenu(instance);
    diag.randomized_checked = true;
    diag.randomized_value = randomized.objective;
    if (randomized.objective > report.objective) {
      diag.dominates_randomized = false;
      diag.messages.push_back("randomized menu value " + ToString(randomized.objective) +
                              " exceeds the unrestricted contract");
    }
  }
  if (diagnostics != nullptr) *diagnostics = std::move(diag);
  return report;
}

}  // namespace bcd
