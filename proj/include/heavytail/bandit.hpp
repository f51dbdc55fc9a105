#pragma once

#include <cstdint>
#include <vector>

#include "heavytail/perturbations.hpp"

namespace heavytail {

// Reward noise: either none (deterministic rewards) or a mean-centered
// shifted Pareto variable z - E[z].
struct NoiseSpec {
  enum class Kind { kNoiseless, kParetoShifted };
  Kind kind = Kind::kNoiseless;
  double alpha = 2.0;   // tail index, > 1 so the mean exists
  double lambda = 1.0;  // scale

  static NoiseSpec noiseless();
  static NoiseSpec pareto_shifted(double alpha, double lambda);

  double pareto_mean() const;  // E[z] = alpha * lambda / (alpha - 1)
};

struct BanditInstance {
  std::vector<double> means;  // all in [0,1]
  NoiseSpec noise;

  int num_arms() const { return static_cast<int>(means.size()); }
  // Lowest index among maximal means.
  int optimal_arm() const;
  std::vector<double> gaps() const;
};

// Reward draw for one (arm, round): mean plus centered noise, deterministic
// given the uniform variate u in (0,1).
double draw_reward(const BanditInstance& instance, int arm, double u);

// Moment bound (|y - E[z]| + alpha^{1/p} lambda / (alpha - p)^{1/p})^p for an
// observation y + (z - E[z]). Requires alpha > p.
double nu_p_bound(const NoiseSpec& noise, double y, double p);

// Gap-parameterized instance: means = (1, 1-delta, ..., 1-delta).
BanditInstance make_gap_instance(int num_arms, double delta, const NoiseSpec& noise);

// Deterministic instance driving the index-policy lower bound: optimal reward
// Delta = nu^{1/p} (eta (K-1) ln T / T)^{(p-1)/p}, all other arms zero.
BanditInstance make_ucb_counterexample(int num_arms, long horizon, double p, double nu, double eta);

// Deterministic instance driving the perturbed-exploration lower bound:
// optimal reward Delta = (1/2) c^{1/p} ((K-1)/T)^{1-1/p} F^{-1}(1 - 1/K).
BanditInstance make_ape_counterexample(int num_arms, long horizon, double p, double c,
                                       const PerturbationSpec& spec);

}  // namespace heavytail
