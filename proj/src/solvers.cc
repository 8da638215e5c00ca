// SPDX-License-Identifier: Apache-2.0

#include "bcd/solvers.h"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace bcd {
namespace {

ActionProfile DecodeProfile(int64_t index, int n, int K) {
  ActionProfile profile(K);
  for (int k = K - 1; k >= 0; --k) {
    profile[k] = static_cast<int>(index % n);
    index /= n;
  }
  return profile;
}

// Solves every profile LP and keeps the first best one in lexicographic order.
SolveReport Enumerate(const InstanceView& view, bool single_contract,
                      const SolverOptions& options) {
  const int64_t count = ProfileCount(view.n(), view.K());
  if (count > options.lp_budget) {
    throw BudgetExceeded("enumeration needs n^K = " + std::to_string(view.n()) + "^" +
                         std::to_string(view.K()) +
                         (count == std::numeric_limits<int64_t>::max()
                              ? std::string(" (overflow)")
                              : " = " + std::to_string(count)) +
                         " LPs, budget is " + std::to_string(options.lp_budget));
  }
  struct Slot {
    bool feasible = false;
    bool certified = true;
    Rational value;
    Menu menu;
  };
  std::vector<Slot> slots(count);
  std::atomic<int64_t> next{0};
  auto work = [&]() {
    for (int64_t idx = next++; idx < count; idx = next++) {
      ProfileSolution sol = SolveMenuForProfile(
          view, DecodeProfile(idx, view.n(), view.K()), single_contract, options);
      Slot& slot = slots[idx];
      slot.feasible = sol.lp.status == LpStatus::kOptimal;
      if (slot.feasible) {
        slot.certified = CheckOptimalityCertificate(sol.program, sol.lp);
        slot.value = std::move(sol.value);
        slot.menu = std::move(sol.menu);
      }
    }
  };
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(count)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  SolveReport report;
  report.kind = single_contract ? "single" : "menu";
  report.lps_solved = count;
  int64_t best = -1;
  for (int64_t idx = 0; idx < count; ++idx) {
    const Slot& slot = slots[idx];
    if (!slot.feasible) {
      ++report.infeasible_profiles;
      continue;
    }
    report.duality_checked = report.duality_checked && slot.certified;
    if (best < 0 || slot.value > slots[best].value) best = idx;
  }
  if (best < 0) throw std::runtime_error("no action profile is implementable");
  report.objective = slots[best].value;
  report.menu = slots[best].menu;
  report.profile = DecodeProfile(best, view.n(), view.K());
  FillMenuReport(view, &report);
  return report;
}

}  // namespace

int64_t ProfileCount(int n, int K) {
  int64_t count = 1;
  for (int k = 0; k < K; ++k) {
    if (count > std::numeric_limits<int64_t>::max() / std::max(n, 1)) {
      return std::numeric_limits<int64_t>::max();
    }
    count *= n;
  }
  return count;
}

ProfileSolution SolveMenuForProfile(const InstanceView& view, const ActionProfile& profile,
                                    bool single_contract, const SolverOptions& options) {
  const int K = view.K();
  const int m = view.m();
  const int n = view.n();
  if (static_cast<int>(profile.size()) != K) {
    throw DimensionError("profile length does not match the number of types");
  }
  for (int a : profile) {
    if (a < 0 || a >= n) throw DimensionError("profile action out of range");
  }
  const int nv = single_contract ? m : K * m;
  auto var = [&](int k, int w) { return single_contract ? w : k * m + w; };

  ProfileSolution sol;
  LinearProgram& lp = sol.program;
  lp.objective.assign(nv, Rational(0));
  lp.free.assign(nv, !options.limited_liability);
  Rational constant = 0;
  for (int k = 0; k < K; ++k) {
    const Vector& row = view.F(k)[profile[k]];
    constant += view.prior()[k] * Dot(row, view.rewards());
    for (int w = 0; w < m; ++w) lp.objective[var(k, w)] -= view.prior()[k] * row[w];
  }
  for (int k = 0; k < K; ++k) {
    const int a = profile[k];
    const Vector& fa = view.F(k)[a];
    for (int q = 0; q < (single_contract ? 1 : K); ++q) {
      const int reported = single_contract ? k : q;
      for (int i = 0; i < n; ++i) {
        if (reported == k && i == a) continue;
        Vector coef(nv);
        for (int w = 0; w < m; ++w) {
          coef[var(k, w)] += fa[w];
          coef[var(reported, w)] -= view.F(k)[i][w];
        }
        lp.AddConstraint(std::move(coef), Sense::kGreaterEqual,
                         view.cost(k, a) - view.cost(k, i));
      }
    }
    // Free payments can shift every outcome down together, which the opt-out
    // no longer prevents; participation has to be stated.
    if (!options.limited_liability) {
      Vector coef(nv);
      for (int w = 0; w < m; ++w) coef[var(k, w)] = fa[w];
      lp.AddConstraint(std::move(coef), Sense::kGreaterEqual, view.cost(k, a));
    }
  }
  sol.lp = SolveLp(lp);
  if (sol.lp.status != LpStatus::kOptimal) return sol;
  sol.value = constant + sol.lp.value;
  sol.menu.actions = profile;
  for (int k = 0; k < K; ++k) {
    Contract c;
    c.limited_liability = options.limited_liability;
    c.payments.resize(m);
    for (int w = 0; w < m; ++w) c.payments[w] = sol.lp.solution[var(k, w)];
    sol.menu.contracts.push_back(std::move(c));
  }
  return sol;
}

void FillMenuReport(const InstanceView& view, SolveReport* report) {
  report->agent_utility.clear();
  report->principal_utility.clear();
  for (int k = 0; k < view.K(); ++k) {
    const Vector& p = report->menu.contracts[k].payments;
    report->agent_utility.push_back(AgentUtility(view, k, p, report->menu.actions[k]));
    report->principal_utility.push_back(
        TypePrincipalUtility(view, k, p, report->menu.actions[k]));
  }
  report->certificate = VerifyIc(view, report->menu, Rational(0));
}

SolveReport SolveOptimalMenu(const InstanceView& view, const SolverOptions& options) {
  return Enumerate(view, false, options);
}

SolveReport SolveOptimalSingle(const InstanceView& view, const SolverOptions& options) {
  return Enumerate(view, true, options);
}

RandomizedSolution SolveRandomizedProgram(const SingleParamInstance& instance,
                                          bool limited_liability) {
  const InstanceView view(instance);
  const int K = view.K();
  const int n = view.n();
  const int m = view.m();
  const int z_count = K * n * m;
  const int pi_base = z_count;
  const int u_base = pi_base + K * n;
  const int nv = u_base + K * K * n;
  auto zv = [&](int k, int i, int w) { return (k * n + i) * m + w; };
  auto piv = [&](int k, int i) { return pi_base + k * n + i; };
  auto uv = [&](int k, int q, int i) { return u_base + (k * K + q) * n + i; };
  const Matrix& F = instance.transitions;

  RandomizedSolution out;
  LinearProgram& lp = out.program;
  lp.objective.assign(nv, Rational(0));
  lp.free.assign(nv, false);
  for (int j = 0; j < z_count; ++j) lp.free[j] = !limited_liability;
  for (int j = u_base; j < nv; ++j) lp.free[j] = true;
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < n; ++i) {
      lp.objective[piv(k, i)] += view.prior()[k] * Dot(F[i], view.rewards());
      for (int w = 0; w < m; ++w) lp.objective[zv(k, i, w)] -= view.prior()[k] * F[i][w];
    }
  }
  for (int k = 0; k < K; ++k) {
    const Rational& theta = instance.types[k];
    for (int q = 0; q < K; ++q) {
      // u^{k,q,i} >= <F_{i'}, z^{q,i}> - theta_k pi(i; q) c_{i'} for every i'.
      for (int i = 0; i < n; ++i) {
        for (int ip = 0; ip < n; ++ip) {
          Vector coef(nv);
          coef[uv(k, q, i)] = 1;
          for (int w = 0; w < m; ++w) coef[zv(q, i, w)] = -F[ip][w];
          coef[piv(q, i)] = theta * instance.unit_costs[ip];
          lp.AddConstraint(std::move(coef), Sense::kGreaterEqual, Rational(0));
        }
      }
      // sum_i [<F_i, z^{k,i}> - theta_k pi(i; k) c_i] >= sum_i u^{k,q,i}.
      Vector coef(nv);
      for (int i = 0; i < n; ++i) {
        for (int w = 0; w < m; ++w) coef[zv(k, i, w)] += F[i][w];
        coef[piv(k, i)] -= theta * instance.unit_costs[i];
        coef[uv(k, q, i)] -= 1;
      }
      lp.AddConstraint(std::move(coef), Sense::kGreaterEqual, Rational(0));
    }
    if (!limited_liability) {
      Vector coef(nv);
      for (int i = 0; i < n; ++i) {
        for (int w = 0; w < m; ++w) coef[zv(k, i, w)] += F[i][w];
        coef[piv(k, i)] -= theta * instance.unit_costs[i];
      }
      lp.AddConstraint(std::move(coef), Sense::kGreaterEqual, Rational(0));
    }
    Vector coef(nv);
    for (int i = 0; i < n; ++i) coef[piv(k, i)] = 1;
    lp.AddConstraint(std::move(coef), Sense::kEqual, Rational(1));
  }
  out.lp = SolveLp(lp);
  if (out.lp.status != LpStatus::kOptimal) return out;
  out.value = out.lp.value;
  out.z.assign(K, std::vector<Vector>(n, Vector(m)));
  out.pi.assign(K, Vector(n));
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < n; ++i) {
      out.pi[k][i] = out.lp.solution[piv(k, i)];
      for (int w = 0; w < m; ++w) out.z[k][i][w] = out.lp.solution[zv(k, i, w)];
    }
  }
  return out;
}

Rational RandomizedObjective(const InstanceView& view, const std::vector<std::vector<Vector>>& z,
                             const std::vector<Vector>& pi) {
  Rational total = 0;
  for (int k = 0; k < view.K(); ++k) {
    for (int i = 0; i < view.n(); ++i) {
      const Vector& row = view.F(k)[i];
      total += view.prior()[k] * (pi[k][i] * Dot(row, view.rewards()) - Dot(row, z[k][i]));
    }
  }
  return total;
}

bool CheckRandomizedFeasibility(const InstanceView& view,
                                const std::vector<std::vector<Vector>>& z,
                                const std::vector<Vector>& pi, bool limited_liability,
                                std::string* why) {
  auto fail = [why](const std::string& msg) {
    if (why != nullptr) *why = msg;
    return false;
  };
  const int K = view.K();
  const int n = view.n();
  for (int k = 0; k < K; ++k) {
    Rational mass = 0;
    for (int i = 0; i < n; ++i) {
      if (sgn(pi[k][i]) < 0) return fail("negative probability");
      mass += pi[k][i];
      if (limited_liability) {
        for (const Rational& x : z[k][i]) {
          if (sgn(x) < 0) return fail("negative payment mass under limited liability");
        }
      }
    }
    if (mass != 1) return fail("probabilities of type " + std::to_string(k) + " sum to " +
                               ToString(mass));
  }
  for (int k = 0; k < K; ++k) {
    Rational honest = 0;
    for (int i = 0; i < n; ++i) {
      honest += Dot(view.F(k)[i], z[k][i]) - pi[k][i] * view.cost(k, i);
    }
    if (!limited_liability && sgn(honest) < 0) {
      return fail("type " + std::to_string(k) + " has negative utility " + ToString(honest));
    }
    for (int q = 0; q < K; ++q) {
      Rational misreport = 0;
      for (int i = 0; i < n; ++i) {
        Rational best;
        for (int ip = 0; ip < n; ++ip) {
          Rational v = Dot(view.F(k)[ip], z[q][i]) - pi[q][i] * view.cost(k, ip);
          if (ip == 0 || v > best) best = v;
        }
        misreport += best;
      }
      if (honest < misreport) {
        return fail("type " + std::to_string(k) + " gains " + ToString(misreport - honest) +
                    " by reporting " + std::to_string(q));
      }
    }
  }
  return true;
}

RandomizedMenu RecoverRandomizedContracts(const InstanceView& view,
                                          const std::vector<std::vector<Vector>>& z,
                                          const std::vector<Vector>& pi) {
  const int K = view.K();
  const int n = view.n();
  const int m = view.m();
  if (static_cast<int>(z.size()) != K || static_cast<int>(pi.size()) != K) {
    throw DimensionError("randomized solution has the wrong number of types");
  }
  RandomizedMenu menu;
  menu.probabilities = pi;
  menu.contracts.assign(K, std::vector<Vector>(n, Zeros(m)));
  for (int k = 0; k < K; ++k) {
    Rational shift = 0;
    for (int i = 0; i < n; ++i) {
      if (sgn(pi[k][i]) < 0) throw std::invalid_argument("negative probability mass");
      if (sgn(pi[k][i]) == 0 && !IsZero(z[k][i])) shift += Dot(view.F(k)[i], z[k][i]);
    }
    for (int i = 0; i < n; ++i) {
      if (sgn(pi[k][i]) == 0) continue;
      Vector& p = menu.contracts[k][i];
      for (int w = 0; w < m; ++w) p[w] = z[k][i][w] / pi[k][i] + shift;
    }
  }
  return menu;
}

Rational RandomizedAgentUtility(const InstanceView& view, const RandomizedMenu& menu,
                                int type) {
  Rational total = 0;
  for (int i = 0; i < view.n(); ++i) {
    const Rational& pi = menu.probabilities[type][i];
    if (sgn(pi) == 0) continue;
    total += pi * AgentUtility(view, type, menu.contracts[type][i], i);
  }
  return total;
}

Rational RandomizedMisreportUtility(const InstanceView& view, const RandomizedMenu& menu,
                                    int type, int reported) {
  Rational total = 0;
  for (int i = 0; i < view.n(); ++i) {
    const Rational& pi = menu.probabilities[reported][i];
    if (sgn(pi) == 0) continue;
    total += pi * ComputeBestResponse(view, type, menu.contracts[reported][i]).agent_utility;
  }
  return total;
}

SolveReport SolveRandomizedMenu(const SingleParamInstance& instance,
                                const SolverOptions& options) {
  const InstanceView view(instance);
  RandomizedSolution sol = SolveRandomizedProgram(instance, options.limited_liability);
  if (sol.lp.status != LpStatus::kOptimal) {
    throw std::runtime_error(std::string("randomized-menu program is ") +
                             LpStatusName(sol.lp.status));
  }
  SolveReport report;
  report.kind = "randomized";
  report.objective = sol.value;
  report.lps_solved = 1;
  report.duality_checked = CheckOptimalityCertificate(sol.program, sol.lp);
  RandomizedMenu menu = RecoverRandomizedContracts(view, sol.z, sol.pi);
  const int K = view.K();
  IcCertificate& cert = report.certificate;
  cert.slack = 0;
  for (int k = 0; k < K; ++k) {
    Rational honest = RandomizedAgentUtility(view, menu, k);
    report.agent_utility.push_back(honest);
    Rational principal = 0;
    for (int i = 0; i < view.n(); ++i) {
      if (sgn(menu.probabilities[k][i]) == 0) continue;
      principal += menu.probabilities[k][i] *
                   TypePrincipalUtility(view, k, menu.contracts[k][i], i);
    }
    report.principal_utility.push_back(principal);
    for (int q = 0; q < K; ++q) {
      ++cert.constraints_checked;
      if (q != k) ++cert.misreport_constraints_checked;
      Rational dev = RandomizedMisreportUtility(view, menu, k, q);
      if (dev > honest) {
        cert.passed = false;
        cert.violations.push_back({k, q, -1, dev - honest});
      }
    }
  }
  report.randomized = std::move(menu);
  return report;
}

}  // namespace bcd
