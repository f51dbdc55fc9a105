#pragma once

#include <vector>

#include "heavytail/perturbations.hpp"

namespace heavytail {

// Inputs shared by the closed-form regret-rate evaluators. Rates are
// leading-order only (constants suppressed), so comparisons across (K, T)
// should always use ratios, never absolute values.
struct BoundInputs {
  double p = 1.5;
  double c = 1.0;
  int num_arms = 2;
  double horizon = 1000.0;
  std::vector<double> gaps;  // suboptimal gaps, each in (0,1]
  PerturbationSpec spec = PerturbationSpec{PerturbKind::kGev, 0.0, 1.0};
};

// Gap-dependent rate: sum over gaps of A * (family-specific factor of B*T)
// with A = ((3 c lambda)^p / gap)^{1/(p-1)} and B = (gap/c)^{p/(p-1)}.
// Contributions with B*T <= 1 are clamped to zero.
double gap_dependent_bound(const BoundInputs& in);

// Gap-independent rate: K^{1-1/p} T^{1/p} times the family's K-factor.
double gap_independent_bound(const BoundInputs& in);

// Lower rate (K ln T)^{1-1/p} T^{1/p} of the scaled index policy. The
// analysis behind it assumes T > 10; smaller horizons still evaluate.
double ucb_lower_rate(int num_arms, double horizon, double p);

// Lower rate K^{1-1/p} T^{1/p} F^{-1}(1 - 1/K) of perturbed exploration.
double ape_lower_rate(int num_arms, double horizon, double p, const PerturbationSpec& spec);

}  // namespace heavytail
