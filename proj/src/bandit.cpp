#include "heavytail/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace heavytail {

NoiseSpec NoiseSpec::noiseless() { return NoiseSpec{}; }

NoiseSpec NoiseSpec::pareto_shifted(double alpha, double lambda) {
  if (!(alpha > 1.0)) throw std::invalid_argument("noise: alpha must exceed 1 so the mean exists");
  if (!(lambda > 0.0)) throw std::invalid_argument("noise: lambda must be positive");
  NoiseSpec n;
  n.kind = Kind::kParetoShifted;
  n.alpha = alpha;
  n.lambda = lambda;
  return n;
}

double NoiseSpec::pareto_mean() const { return alpha * lambda / (alpha - 1.0); }

int BanditInstance::optimal_arm() const {
  int best = 0;
  for (int a = 1; a < num_arms(); ++a) {
    if (means[a] > means[best]) best = a;
  }
  return best;
}

std::vector<double> BanditInstance::gaps() const {
  const double top = means[optimal_arm()];
  std::vector<double> g(means.size());
  for (std::size_t a = 0; a < means.size(); ++a) g[a] = top - means[a];
  return g;
}

double draw_reward(const BanditInstance& instance, int arm, double u) {
  if (arm < 0 || arm >= instance.num_arms()) {
    throw std::out_of_range("draw_reward: arm index out of range");
  }
  if (instance.noise.kind == NoiseSpec::Kind::kNoiseless) return instance.means[arm];
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("draw_reward: u must lie in (0,1)");
  const double z = instance.noise.lambda * std::exp(-std::log1p(-u) / instance.noise.alpha);
  return instance.means[arm] + (z - instance.noise.pareto_mean());
}

double nu_p_bound(const NoiseSpec& noise, double y, double p) {
  if (noise.kind != NoiseSpec::Kind::kParetoShifted) {
    throw std::invalid_argument("nu_p_bound: defined for shifted-Pareto noise");
  }
  if (!(noise.alpha > p)) {
    throw std::invalid_argument("nu_p_bound: requires alpha > p");
  }
  const double centered = std::abs(y - noise.pareto_mean());
  const double moment = std::pow(noise.alpha, 1.0 / p) * noise.lambda /
                        std::pow(noise.alpha - p, 1.0 / p);
  return std::pow(centered + moment, p);
}

BanditInstance make_gap_instance(int num_arms, double delta, const NoiseSpec& noise) {
  if (num_arms < 2) throw std::invalid_argument("make_gap_instance: need at least two arms");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("make_gap_instance: delta must lie in (0,1]");
  }
  BanditInstance instance;
  instance.means.assign(num_arms, 1.0 - delta);
  instance.means[0] = 1.0;
  instance.noise = noise;
  return instance;
}

BanditInstance make_ucb_counterexample(int num_arms, long horizon, double p, double nu,
                                       double eta) {
  if (num_arms < 2) throw std::invalid_argument("make_ucb_counterexample: need at least two arms");
  if (horizon < 1) throw std::invalid_argument("make_ucb_counterexample: horizon must be positive");
  const double t = static_cast<double>(horizon);
  const double delta = std::pow(nu, 1.0 / p) *
                       std::pow(eta * (num_arms - 1) * std::log(t) / t, (p - 1.0) / p);
  if (!(delta <= 1.0)) {
    std::ostringstream os;
    os << "make_ucb_counterexample: horizon too small, derived gap " << delta << " exceeds 1";
    throw std::invalid_argument(os.str());
  }
  BanditInstance instance;
  instance.means.assign(num_arms, 0.0);
  instance.means[0] = delta;
  instance.noise = NoiseSpec::noiseless();
  return instance;
}

BanditInstance make_ape_counterexample(int num_arms, long horizon, double p, double c,
                                       const PerturbationSpec& spec) {
  if (num_arms < 2) throw std::invalid_argument("make_ape_counterexample: need at least two arms");
  const double k1 = static_cast<double>(num_arms - 1);
  const double c_max = k1 / (k1 + std::pow(2.0, p / (p - 1.0)));
  if (!(c > 0.0 && c < c_max)) {
    std::ostringstream os;
    os << "make_ape_counterexample: scale precondition violated, need 0 < c < " << c_max
       << " = (K-1)/(K-1+2^{p/(p-1)}), got c = " << c;
    throw std::invalid_argument(os.str());
  }
  const double quantile = inverse_cdf(spec, 1.0 - 1.0 / num_arms);
  const double t_min = std::pow(c, 1.0 / (p - 1.0)) * k1 / std::pow(2.0, p / (p - 1.0)) *
                       std::pow(std::abs(quantile), p / (p - 1.0));
  const double t = static_cast<double>(horizon);
  if (!(t >= t_min)) {
    std::ostringstream os;
    os << "make_ape_counterexample: horizon precondition violated, need T >= " << t_min
       << ", got T = " << horizon;
    throw std::invalid_argument(os.str());
  }
  const double delta = 0.5 * std::pow(c, 1.0 / p) * std::pow(k1 / t, 1.0 - 1.0 / p) * quantile;
  if (!(delta >= 0.0 && delta <= 1.0)) {
    std::ostringstream os;
    os << "make_ape_counterexample: derived gap " << delta << " falls outside [0,1]";
    throw std::invalid_argument(os.str());
  }
  BanditInstance instance;
  instance.means.assign(num_arms, 0.0);
  instance.means[0] = delta;
  instance.noise = NoiseSpec::noiseless();
  return instance;
}

}  // namespace heavytail
