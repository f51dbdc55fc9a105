#include "heavytail/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "heavytail/influence.hpp"

namespace heavytail {

const char* estimator_kind_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kSampleMean: return "sample_mean";
    case EstimatorKind::kTruncatedMean: return "truncated_mean";
    case EstimatorKind::kMedianOfMeans: return "median_of_means";
    case EstimatorKind::kPRobust: return "p_robust";
  }
  return "unknown";
}

EstimatorKind estimator_kind_from_name(const std::string& name) {
  if (name == "sample_mean") return EstimatorKind::kSampleMean;
  if (name == "truncated_mean") return EstimatorKind::kTruncatedMean;
  if (name == "median_of_means") return EstimatorKind::kMedianOfMeans;
  if (name == "p_robust") return EstimatorKind::kPRobust;
  throw std::invalid_argument("unknown estimator kind: " + name);
}

EstimatorSpec EstimatorSpec::sample_mean() { return EstimatorSpec{}; }

EstimatorSpec EstimatorSpec::truncated_mean(double p, double nu_p, double delta) {
  if (!(nu_p > 0.0)) throw std::invalid_argument("truncated_mean: nu_p must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("truncated_mean: delta in (0,1)");
  EstimatorSpec s;
  s.kind = EstimatorKind::kTruncatedMean;
  s.p = p;
  s.nu_p = nu_p;
  s.delta = delta;
  return s;
}

EstimatorSpec EstimatorSpec::median_of_means(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("median_of_means: delta in (0,1)");
  EstimatorSpec s;
  s.kind = EstimatorKind::kMedianOfMeans;
  s.delta = delta;
  return s;
}

EstimatorSpec EstimatorSpec::p_robust(double p, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("p_robust: c must be positive");
  EstimatorSpec s;
  s.kind = EstimatorKind::kPRobust;
  s.p = p;
  s.c = c;
  return s;
}

std::size_t median_of_means_blocks(double delta, std::size_t n) {
  const auto by_delta = static_cast<std::size_t>(std::floor(8.0 * std::log(1.0 / delta))) + 1;
  return std::max<std::size_t>(1, std::min(by_delta, n / 2));
}

namespace {

double sample_mean_of(std::span<const double> samples) {
  double sum = 0.0;
  for (const double y : samples) sum += y;
  return sum / static_cast<double>(samples.size());
}

double truncated_mean_of(std::span<const double> samples, double p, double nu_p, double delta) {
  // Index-dependent truncation: sample i survives iff
  // |Y_i| <= (nu_p * i / ln(1/delta))^{1/p}, compared in p-th powers.
  const double log_inv_delta = std::log(1.0 / delta);
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double y = samples[i];
    const double cutoff = nu_p * static_cast<double>(i + 1) / log_inv_delta;
    if (std::pow(std::abs(y), p) <= cutoff) sum += y;
  }
  return sum / static_cast<double>(samples.size());
}

double median_of_means_of(std::span<const double> samples, double delta) {
  const std::size_t n = samples.size();
  const std::size_t k = median_of_means_blocks(delta, n);
  // contiguous blocks; the first n % k blocks carry one extra sample
  std::vector<double> block_means;
  block_means.reserve(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) sum += samples[pos + j];
    block_means.push_back(sum / static_cast<double>(len));
    pos += len;
  }
  std::sort(block_means.begin(), block_means.end());
  if (k % 2 == 1) return block_means[k / 2];
  return 0.5 * (block_means[k / 2 - 1] + block_means[k / 2]);
}

}  // namespace

double estimate(const EstimatorSpec& spec, std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("estimate: empty sample");
  switch (spec.kind) {
    case EstimatorKind::kSampleMean:
      return sample_mean_of(samples);
    case EstimatorKind::kTruncatedMean:
      if (!spec.nu_p || !spec.delta) {
        throw std::invalid_argument("estimate: truncated mean requires nu_p and delta");
      }
      return truncated_mean_of(samples, spec.p, *spec.nu_p, *spec.delta);
    case EstimatorKind::kMedianOfMeans:
      if (!spec.delta) throw std::invalid_argument("estimate: median of means requires delta");
      return median_of_means_of(samples, *spec.delta);
    case EstimatorKind::kPRobust: {
      if (!spec.c) throw std::invalid_argument("estimate: p_robust requires c");
      const auto params = InfluenceParams::make(spec.p, *spec.c);
      return p_robust_estimate(params, samples);
    }
  }
  throw std::invalid_argument("estimate: unknown estimator kind");
}

}  // namespace heavytail
