// Criteria 1-2: concentration of the influence-function estimator and the
// estimator-convergence comparison.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "acceptance.hpp"
#include "heavytail/bandit.hpp"
#include "heavytail/engine.hpp"
#include "heavytail/estimators.hpp"
#include "heavytail/influence.hpp"
#include "heavytail/rng.hpp"

namespace acceptance {

using namespace heavytail;

bool criterion1_estimator_tail_bound() {
  // One-sided exceedance frequency of the estimator over 1e5 trials of
  // shifted-Pareto samples must stay below the theoretical bound plus three
  // binomial standard errors, across p x n x eps.
  const int trials = 100000;
  const double y = 1.0;
  bool pass = true;
  std::ostringstream detail;

  for (const double p : {1.5, 2.0}) {
    const auto noise = NoiseSpec::pareto_shifted(p + 0.05, 1.0);
    BanditInstance source;
    source.means = {y, 0.0};
    source.noise = noise;
    const auto params = InfluenceParams::make(p, 1.0);
    const double nu = nu_p_bound(noise, y, p);

    for (const std::size_t n : {16u, 64u, 256u}) {
      CounterRng rng(derive_stream_key(2024, n, static_cast<std::uint64_t>(p * 100),
                                       StreamTag::kEstimatorNoise));
      std::vector<double> samples(n);
      long exceed[2] = {0, 0};  // eps = 0.5, 1.0
      for (int trial = 0; trial < trials; ++trial) {
        for (auto& s : samples) s = draw_reward(source, 0, rng.next_open01());
        const double deviation = p_robust_estimate(params, samples) - y;
        if (deviation > 0.5) ++exceed[0];
        if (deviation > 1.0) ++exceed[1];
      }
      const double eps_grid[2] = {0.5, 1.0};
      for (int e = 0; e < 2; ++e) {
        const double q = static_cast<double>(exceed[e]) / trials;
        const double bound = tail_bound(params, n, eps_grid[e], nu);
        const double sigma = std::sqrt(std::max(q * (1.0 - q), 1e-12) / trials);
        const bool ok = q <= bound + 3.0 * sigma;
        pass = pass && ok;
        char line[160];
        std::snprintf(line, sizeof(line),
                      "p=%.1f n=%3zu eps=%.1f: empirical %.5f vs bound %.5f %s", p, n,
                      eps_grid[e], q, bound, ok ? "ok" : "VIOLATED");
        detail << line << '\n';
      }
    }
  }
  report(1, "estimator tail bound (shifted-Pareto Monte Carlo)", pass, detail.str());
  return pass;
}

bool criterion2_estimator_convergence() {
  // p = 1.5, lambda = 1.0, t = 5000, 60 runs: the influence estimator with a
  // grid-searched scale must beat the sample mean and the median of means in
  // mean absolute error at the final round.
  const double p = 1.5;
  const double y = 1.0;
  const long horizon = 5000;
  const int runs = 60;
  const auto noise = NoiseSpec::pareto_shifted(p + 0.05, 1.0);
  const auto grid = default_search_grid();

  std::vector<double> grid_error(grid.size(), 0.0);
  double mean_error = 0.0;
  double mom_error = 0.0;

  BanditInstance source;
  source.means = {y, 0.0};
  source.noise = noise;

  std::vector<double> samples(horizon);
  std::vector<double> moments(horizon);
  for (int run = 0; run < runs; ++run) {
    // same stream layout as the engine's estimator mode
    CounterRng rng(9000, static_cast<std::uint64_t>(run), 0, StreamTag::kEstimatorNoise);
    for (long t = 0; t < horizon; ++t) {
      samples[t] = draw_reward(source, 0, rng.next_open01());
      moments[t] = std::pow(std::abs(samples[t]), p);
    }
    mean_error += std::abs(estimate(EstimatorSpec::sample_mean(), samples) - y) / runs;
    mom_error += std::abs(estimate(EstimatorSpec::median_of_means(0.01), samples) - y) / runs;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto params = InfluenceParams::make(p, grid[g]);
      grid_error[g] +=
          std::abs(p_robust_estimate_cached(params, samples, moments, samples.size()) - y) / runs;
    }
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (grid_error[g] < grid_error[best]) best = g;
  }
  const double robust_error = grid_error[best];
  const bool pass = robust_error < mean_error && robust_error < mom_error;

  std::ostringstream detail;
  char line[200];
  std::snprintf(line, sizeof(line),
                "62-point grid best c=%g: influence %.5f vs sample mean %.5f, "
                "median of means %.5f",
                grid[best], robust_error, mean_error, mom_error);
  detail << line;
  report(2, "estimator convergence comparison at t=5000", pass, detail.str());
  return pass;
}

}  // namespace acceptance
