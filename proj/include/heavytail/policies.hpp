#pragma once

#include <memory>
#include <span>
#include <vector>

#include "heavytail/bandit.hpp"
#include "heavytail/estimators.hpp"
#include "heavytail/influence.hpp"
#include "heavytail/perturbations.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

// Common interface the simulation loop drives. Rounds are 1-based; the
// engine plays arms 0..K-1 in order for the first K rounds (initialization)
// and only then calls select(). Policies own one trial's state and are not
// shared across threads.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual int num_arms() const = 0;
  // Chooses the arm for round t. rng feeds perturbation draws; deterministic
  // policies ignore it.
  virtual int select(long t, CounterRng& rng) = 0;
  // Records the reward received for `arm` at round t and refreshes that
  // arm's estimate. Only the pulled arm's estimate changes.
  virtual void update(int arm, double reward, long t) = 0;

  virtual long pull_count(int arm) const = 0;
  virtual double estimate(int arm) const = 0;
  virtual std::span<const double> history(int arm) const = 0;
};

// Perturbed greedy selection with the influence-function estimator: every
// round each arm's estimate gets the bonus beta_a * G_a with
// beta_a = c / n_a^{1-1/p} and G_a a fresh quantile-transformed draw.
class Ape2Policy : public Policy {
 public:
  Ape2Policy(int num_arms, const InfluenceParams& params, const PerturbationSpec& perturbation);

  int num_arms() const override { return static_cast<int>(arms_.size()); }
  int select(long t, CounterRng& rng) override;
  void update(int arm, double reward, long t) override;
  long pull_count(int arm) const override { return static_cast<long>(arms_[arm].values.size()); }
  double estimate(int arm) const override { return arms_[arm].estimate; }
  std::span<const double> history(int arm) const override { return arms_[arm].values; }

  // Selection from explicit per-arm uniforms, one per arm. Requires every
  // arm to have been pulled at least once.
  int select_with(std::span<const double> uniforms) const;

  double exploration_scale(int arm) const;  // beta_a for the current count

 private:
  struct Arm {
    std::vector<double> values;
    std::vector<double> abs_pow_p;  // |value|^p, cached for the O(n) recompute
    double estimate = 0.0;
  };
  InfluenceParams params_;
  PerturbationSpec perturbation_;
  std::vector<Arm> arms_;
};

// Index policy with a robust-estimator confidence bound, scaled by c:
// argmax_a r_a + c * nu_p^{1/p} (eta ln(t^2) / n_a)^{1-1/p}. Estimates are
// refreshed at pull time with delta = t^{-2}.
class RobustUcbPolicy : public Policy {
 public:
  RobustUcbPolicy(int num_arms, double p, double nu_p, double eta, double scale,
                  EstimatorKind estimator = EstimatorKind::kTruncatedMean);

  int num_arms() const override { return static_cast<int>(arms_.size()); }
  int select(long t, CounterRng& rng) override;
  void update(int arm, double reward, long t) override;
  long pull_count(int arm) const override { return static_cast<long>(arms_[arm].values.size()); }
  double estimate(int arm) const override { return arms_[arm].estimate; }
  std::span<const double> history(int arm) const override { return arms_[arm].values; }

  // Confidence radius for an arm with n pulls at round t.
  double confidence_radius(long n, long t) const;

 private:
  struct Arm {
    std::vector<double> values;
    std::vector<double> abs_pow_p;
    double estimate = 0.0;
  };
  double p_;
  double nu_p_;
  double eta_;
  double scale_;
  EstimatorKind estimator_;
  std::vector<Arm> arms_;

  double recompute_estimate(const Arm& arm, long t) const;
};

// Deterministic sequencing baseline: explore the least-pulled arm while
// min_a n_a < ceil(w ln(t+1)), otherwise exploit the best sample mean.
class DseePolicy : public Policy {
 public:
  DseePolicy(int num_arms, double w);

  int num_arms() const override { return static_cast<int>(arms_.size()); }
  int select(long t, CounterRng& rng) override;
  void update(int arm, double reward, long t) override;
  long pull_count(int arm) const override { return static_cast<long>(arms_[arm].values.size()); }
  double estimate(int arm) const override { return arms_[arm].mean; }
  std::span<const double> history(int arm) const override { return arms_[arm].values; }

  long exploration_threshold(long t) const;

 private:
  struct Arm {
    std::vector<double> values;
    double sum = 0.0;
    double mean = 0.0;
  };
  double w_;
  std::vector<Arm> arms_;
};

}  // namespace heavytail
