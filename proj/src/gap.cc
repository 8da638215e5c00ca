// SPDX-License-Identifier: Apache-2.0

#include "bcd/gap.h"

#include <stdexcept>

namespace bcd {
namespace {

constexpr int kEmpty = 0;
constexpr int kPlus = 1;

int BaseN(int n, bool pad_even) {
  if (n < 3) throw std::invalid_argument("gap family needs n >= 3");
  if (n % 2 == 0) {
    if (!pad_even) throw std::invalid_argument("gap family needs odd n (or padding)");
    if (n - 1 < 3) throw std::invalid_argument("padded gap family needs n >= 4");
    return n - 1;
  }
  return n;
}

}  // namespace

int GapOutcomeOmega(int i) { return 1 + i; }
int GapActionFirst(int i) { return 2 * i - 1; }
int GapActionSecond(int i) { return 2 * i; }

GapParams MakeGapParams(int n, bool pad_even) {
  const int base = BaseN(n, pad_even);
  GapParams gp;
  gp.n = base;
  gp.n_bar = (base - 1) / 2;
  gp.l = 2 * static_cast<int64_t>(base) * base;
  gp.padded = base != n;
  gp.C = 0;
  for (int i = 1; i <= gp.n_bar; ++i) gp.C += Pow2(i * base + i * gp.l);
  return gp;
}

SingleParamInstance BuildGapInstance(int n, bool pad_even, GapParams* params_out) {
  const GapParams gp = MakeGapParams(n, pad_even);
  const int nb = gp.n_bar;
  const int64_t l = gp.l;
  const int m = nb + 2;
  SingleParamInstance inst;
  inst.rewards = Zeros(m);
  inst.rewards[kPlus] = 1;

  Vector opt_out = Zeros(m);
  opt_out[kEmpty] = 1;
  inst.transitions.push_back(opt_out);
  inst.unit_costs.push_back(Rational(0));
  for (int i = 1; i <= nb; ++i) {
    const Rational q = Pow2(-i * l);
    Vector first = Zeros(m);
    first[kPlus] = q;
    first[GapOutcomeOmega(i)] = q;
    first[kEmpty] = 1 - 2 * q;
    inst.transitions.push_back(first);
    inst.unit_costs.push_back(Pow2(-2 * i * l) * (1 - Pow2(-i * gp.n)));

    Vector second = Zeros(m);
    for (int j = 1; j <= nb; ++j) second[GapOutcomeOmega(j)] = q;
    second[kPlus] = q;
    second[kEmpty] = 1 - q * (nb + 1);
    inst.transitions.push_back(second);
    inst.unit_costs.push_back(Pow2(-2 * i * l));
  }
  if (gp.padded) {
    inst.transitions.push_back(opt_out);
    inst.unit_costs.push_back(Rational(0));
  }
  for (int i = 1; i <= nb; ++i) {
    inst.types.push_back(Pow2(i * l));
    Rational mu = Pow2(i * gp.n + i * l) / gp.C;
    inst.prior.push_back(mu);
  }
  if (params_out != nullptr) *params_out = gp;
  return inst;
}

Menu BuildGapMenu(int n, bool pad_even) {
  const GapParams gp = MakeGapParams(n, pad_even);
  const int m = gp.n_bar + 2;
  Menu menu;
  for (int i = 1; i <= gp.n_bar; ++i) {
    Contract c{Zeros(m), true};
    c.payments[GapOutcomeOmega(i)] = 1 - Pow2(-i * gp.n - 1);
    menu.contracts.push_back(std::move(c));
    menu.actions.push_back(GapActionFirst(i));
  }
  return menu;
}

}  // namespace bcd
