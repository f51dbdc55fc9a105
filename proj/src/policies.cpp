#include "heavytail/policies.hpp"

#include <cmath>
#include <stdexcept>

namespace heavytail {

namespace {

int argmax_lowest_index(std::span<const double> scores) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(scores.size()); ++a) {
    if (scores[a] > scores[best]) best = a;
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ape2Policy

Ape2Policy::Ape2Policy(int num_arms, const InfluenceParams& params,
                       const PerturbationSpec& perturbation)
    : params_(params), perturbation_(perturbation), arms_(num_arms) {
  if (num_arms < 2) throw std::invalid_argument("Ape2Policy: need at least two arms");
  validate(perturbation_);
}

double Ape2Policy::exploration_scale(int arm) const {
  const auto n = static_cast<double>(arms_[arm].values.size());
  return params_.c / std::pow(n, 1.0 - 1.0 / params_.p);
}

int Ape2Policy::select_with(std::span<const double> uniforms) const {
  if (uniforms.size() != arms_.size()) {
    throw std::invalid_argument("Ape2Policy: need one uniform per arm");
  }
  std::vector<double> scores(arms_.size());
  for (std::size_t a = 0; a < arms_.size(); ++a) {
    if (arms_[a].values.empty()) {
      throw std::logic_error("Ape2Policy: selection before every arm was initialized");
    }
    const double g = inverse_cdf(perturbation_, uniforms[a]);
    scores[a] = arms_[a].estimate + exploration_scale(static_cast<int>(a)) * g;
  }
  return argmax_lowest_index(scores);
}

int Ape2Policy::select(long /*t*/, CounterRng& rng) {
  // One fresh perturbation per arm per round, in arm order.
  std::vector<double> uniforms(arms_.size());
  for (auto& u : uniforms) u = rng.next_open01();
  return select_with(uniforms);
}

void Ape2Policy::update(int arm, double reward, long /*t*/) {
  Arm& st = arms_[arm];
  st.values.push_back(reward);
  st.abs_pow_p.push_back(std::pow(std::abs(reward), params_.p));
  st.estimate = p_robust_estimate_cached(params_, st.values, st.abs_pow_p, st.values.size());
}

// ---------------------------------------------------------------------------
// RobustUcbPolicy

RobustUcbPolicy::RobustUcbPolicy(int num_arms, double p, double nu_p, double eta, double scale,
                                 EstimatorKind estimator)
    : p_(p), nu_p_(nu_p), eta_(eta), scale_(scale), estimator_(estimator), arms_(num_arms) {
  if (num_arms < 2) throw std::invalid_argument("RobustUcbPolicy: need at least two arms");
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("RobustUcbPolicy: p must lie in (1,2]");
  if (!(nu_p > 0.0) || !(eta > 0.0)) {
    throw std::invalid_argument("RobustUcbPolicy: nu_p and eta must be positive");
  }
  if (estimator_ == EstimatorKind::kPRobust) {
    throw std::invalid_argument("RobustUcbPolicy: use an Assumption-1 estimator");
  }
}

double RobustUcbPolicy::confidence_radius(long n, long t) const {
  const double log_t2 = 2.0 * std::log(static_cast<double>(t));
  return scale_ * std::pow(nu_p_, 1.0 / p_) *
         std::pow(eta_ * log_t2 / static_cast<double>(n), 1.0 - 1.0 / p_);
}

double RobustUcbPolicy::recompute_estimate(const Arm& arm, long t) const {
  const std::size_t n = arm.values.size();
  switch (estimator_) {
    case EstimatorKind::kSampleMean: {
      double sum = 0.0;
      for (const double y : arm.values) sum += y;
      return sum / static_cast<double>(n);
    }
    case EstimatorKind::kTruncatedMean: {
      // delta = t^{-2}; the cutoff is compared in p-th powers against the
      // cached |Y_i|^p, which keeps the refresh free of pow() calls.
      const double log_inv_delta = 2.0 * std::log(static_cast<double>(t));
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (arm.abs_pow_p[i] * log_inv_delta <= nu_p_ * static_cast<double>(i + 1)) {
          sum += arm.values[i];
        }
      }
      return sum / static_cast<double>(n);
    }
    case EstimatorKind::kMedianOfMeans: {
      const double delta = 1.0 / (static_cast<double>(t) * static_cast<double>(t));
      return ::heavytail::estimate(EstimatorSpec::median_of_means(delta), arm.values);
    }
    case EstimatorKind::kPRobust:
      break;
  }
  throw std::logic_error("RobustUcbPolicy: unsupported estimator");
}

int RobustUcbPolicy::select(long t, CounterRng& /*rng*/) {
  std::vector<double> scores(arms_.size());
  for (std::size_t a = 0; a < arms_.size(); ++a) {
    const long n = static_cast<long>(arms_[a].values.size());
    if (n == 0) throw std::logic_error("RobustUcbPolicy: selection before initialization");
    scores[a] = arms_[a].estimate + confidence_radius(n, t);
  }
  return argmax_lowest_index(scores);
}

void RobustUcbPolicy::update(int arm, double reward, long t) {
  Arm& st = arms_[arm];
  st.values.push_back(reward);
  st.abs_pow_p.push_back(std::pow(std::abs(reward), p_));
  st.estimate = recompute_estimate(st, t);
}

// ---------------------------------------------------------------------------
// DseePolicy

DseePolicy::DseePolicy(int num_arms, double w) : w_(w), arms_(num_arms) {
  if (num_arms < 2) throw std::invalid_argument("DseePolicy: need at least two arms");
  if (!(w > 0.0)) throw std::invalid_argument("DseePolicy: w must be positive");
}

long DseePolicy::exploration_threshold(long t) const {
  return static_cast<long>(std::ceil(w_ * std::log(static_cast<double>(t) + 1.0)));
}

int DseePolicy::select(long t, CounterRng& /*rng*/) {
  int least = 0;
  long least_count = pull_count(0);
  for (int a = 1; a < num_arms(); ++a) {
    const long n = pull_count(a);
    if (n < least_count) {
      least = a;
      least_count = n;
    }
  }
  if (least_count < exploration_threshold(t)) return least;
  int best = 0;
  for (int a = 1; a < num_arms(); ++a) {
    if (arms_[a].mean > arms_[best].mean) best = a;
  }
  return best;
}

void DseePolicy::update(int arm, double reward, long /*t*/) {
  Arm& st = arms_[arm];
  st.values.push_back(reward);
  st.sum += reward;
  st.mean = st.sum / static_cast<double>(st.values.size());
}

}  // namespace heavytail
