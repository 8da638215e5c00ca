// SPDX-License-Identifier: Apache-2.0

#include "bcd/reduction.h"

#include <algorithm>
#include <stdexcept>

#include "bcd/unrestricted.h"

namespace bcd {

ReductionParams ChooseParameters(const MultiParamInstance& instance, const Rational& epsilon) {
  if (sgn(epsilon) <= 0) throw std::invalid_argument("epsilon must be positive");
  if (instance.prior.empty()) throw std::invalid_argument("instance has no types");
  const int K = instance.num_types();
  ReductionParams p;
  p.epsilon = epsilon;
  p.mu_min = *std::min_element(instance.prior.begin(), instance.prior.end());
  const Rational x = p.mu_min * epsilon;
  int64_t l = 0;
  while (Pow2(l) * x <= 4) ++l;
  ++l;
  while (Pow2(K * l + 1) <= epsilon) ++l;
  p.l = l;
  p.alpha = 1 / (Pow2((K + 1) * l) + 1);
  Rational weight = 0;
  for (int k = 1; k <= K; ++k) weight += instance.prior[k - 1] * Pow2(k * l);
  p.H = p.alpha / weight;
  return p;
}

Reduction Reduce(const MultiParamInstance& instance, const Rational& epsilon) {
  if (HasErrors(Validate(instance))) {
    throw std::invalid_argument("reduction input fails validation");
  }
  const int K = instance.num_types();
  const int n = instance.num_actions();
  const int m = instance.num_outcomes();
  Reduction out;
  ReductionMap& map = out.map;
  map.n = n;
  map.m = m;
  map.K = K;
  map.params = ChooseParameters(instance, epsilon);
  map.dummy_action = n * K;
  map.dummy_outcome = m;
  map.extra_type = K;
  const int64_t l = map.params.l;

  SingleParamInstance& s = out.instance;
  s.rewards = instance.rewards;
  s.rewards.push_back(Rational(0));
  for (int k = 1; k <= K; ++k) {
    const Rational scale = Pow2(-k * l);
    const Rational cost_scale = Pow2(-2 * k * l);
    for (int i = 0; i < n; ++i) {
      Vector row(m + 1);
      Rational mass = 0;
      for (int w = 0; w < m; ++w) {
        row[w] = scale * instance.transitions[k - 1][i][w];
        mass += row[w];
      }
      row[m] = 1 - mass;
      s.transitions.push_back(std::move(row));
      s.unit_costs.push_back(cost_scale * (instance.costs[k - 1][i] + epsilon));
    }
  }
  Vector dummy = Zeros(m + 1);
  dummy[m] = 1;
  s.transitions.push_back(dummy);
  s.unit_costs.push_back(Rational(0));

  for (int k = 1; k <= K; ++k) {
    map.type_values.push_back(Pow2(k * l));
    s.types.push_back(Pow2(k * l));
    s.prior.push_back(instance.prior[k - 1] * Pow2(k * l) * map.params.H);
  }
  map.extra_type_value = Pow2(2 * K * l + 1) / epsilon;
  s.types.push_back(map.extra_type_value);
  s.prior.push_back(1 - map.params.alpha);

  for (size_t k = 1; k < s.types.size(); ++k) {
    if (s.types[k] <= s.types[k - 1]) {
      throw std::logic_error("reduced types are not strictly increasing");
    }
  }
  return out;
}

RegularityReport CheckRegularity(const SingleParamInstance& instance) {
  RegularityReport report;
  report.virtual_costs = VirtualCosts(instance).phi;
  for (size_t k = 1; k < report.virtual_costs.size(); ++k) {
    if (report.virtual_costs[k] < report.virtual_costs[k - 1]) report.regular = false;
  }
  return report;
}

Rational EpsilonForAccuracy(const Rational& xi, int64_t tau) {
  Rational root = Pow2(-tau) * xi / 10;
  return root * root;
}

int64_t DefaultTau(const MultiParamInstance& instance) {
  int64_t bits = 0;
  for (const Rational& x : instance.rewards) bits += BitLength(x);
  for (const Rational& x : instance.prior) bits += BitLength(x);
  for (const Matrix& F : instance.transitions) {
    for (const Vector& row : F) {
      for (const Rational& x : row) bits += BitLength(x);
    }
  }
  for (const Vector& c : instance.costs) {
    for (const Rational& x : c) bits += BitLength(x);
  }
  return bits;
}

}  // namespace bcd
