#pragma once

#include <optional>
#include <span>
#include <string>

namespace heavytail {

enum class EstimatorKind { kSampleMean, kTruncatedMean, kMedianOfMeans, kPRobust };

const char* estimator_kind_name(EstimatorKind kind);
EstimatorKind estimator_kind_from_name(const std::string& name);

// Mean estimator selection plus the per-kind parameters. TruncatedMean needs
// the moment bound nu_p and the confidence level delta; MedianOfMeans needs
// delta; the influence estimator needs the scale c.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::kSampleMean;
  double p = 2.0;
  std::optional<double> nu_p;
  std::optional<double> delta;
  std::optional<double> c;

  static EstimatorSpec sample_mean();
  static EstimatorSpec truncated_mean(double p, double nu_p, double delta);
  static EstimatorSpec median_of_means(double delta);
  static EstimatorSpec p_robust(double p, double c);
};

// Number of median-of-means blocks used for n samples at confidence delta:
// max(1, min(floor(8 ln(1/delta)) + 1, floor(n/2))).
std::size_t median_of_means_blocks(double delta, std::size_t n);

// Evaluates the configured estimator on the samples. Throws on empty input or
// missing parameters.
double estimate(const EstimatorSpec& spec, std::span<const double> samples);

}  // namespace heavytail
