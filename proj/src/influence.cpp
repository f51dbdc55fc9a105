#include "heavytail/influence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heavytail {

double compute_bp(double p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw std::invalid_argument("compute_bp: moment order p must lie in (1, 2]");
  }
  if (p == 2.0) {
    // The bracket tends to 2 and the exponent to -1 as p -> 2; the formula
    // itself hits 0^0 at the boundary.
    return 0.5;
  }
  const double ratio = (2.0 - p) / (p - 1.0);
  const double bracket = 2.0 * std::pow(ratio, 1.0 - 2.0 / p) + std::pow(ratio, 2.0 - 2.0 / p);
  return std::pow(bracket, -p / 2.0);
}

InfluenceParams InfluenceParams::make(double p, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("InfluenceParams: scale c must be positive");
  return InfluenceParams{p, compute_bp(p), c};
}

double psi(const InfluenceParams& params, double x) {
  // Both branches of the definition collapse to the magnitude form
  // sign(x) * ln(b_p|x|^p + |x| + 1); the log argument is >= 1.
  const double ax = std::abs(x);
  const double arg = params.b_p * std::pow(ax, params.p) + ax + 1.0;
  return std::copysign(std::log(arg), x);
}

double p_robust_estimate(const InfluenceParams& params, std::span<const double> samples,
                         std::optional<std::size_t> n_override) {
  if (samples.empty()) throw std::invalid_argument("p_robust_estimate: empty sample");
  const std::size_t n = n_override.value_or(samples.size());
  if (n == 0) throw std::invalid_argument("p_robust_estimate: count override must be positive");
  const double nd = static_cast<double>(n);
  const double scale = params.c * std::pow(nd, 1.0 / params.p);
  double sum = 0.0;
  for (const double y : samples) sum += psi(params, y / scale);
  return scale / nd * sum;  // scale/n == c / n^{1-1/p}
}

double p_robust_estimate_cached(const InfluenceParams& params, std::span<const double> values,
                                std::span<const double> abs_pow_p, std::size_t n) {
  if (values.empty() || n == 0) {
    throw std::invalid_argument("p_robust_estimate_cached: empty sample");
  }
  const double nd = static_cast<double>(n);
  const double scale = params.c * std::pow(nd, 1.0 / params.p);
  const double pow_scale = std::pow(params.c, params.p) * nd;  // (c n^{1/p})^p
  const double b_over = params.b_p / pow_scale;
  const double inv_scale = 1.0 / scale;
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    const double arg = b_over * abs_pow_p[k] + std::abs(v) * inv_scale + 1.0;
    sum += std::copysign(std::log(arg), v);
  }
  return scale / nd * sum;
}

double tail_bound(const InfluenceParams& params, std::size_t n, double eps, double nu_p) {
  if (n < 1) throw std::invalid_argument("tail_bound: n must be at least 1");
  if (eps < 0.0 || nu_p < 0.0) {
    throw std::invalid_argument("tail_bound: eps and nu_p must be nonnegative");
  }
  const double nd = static_cast<double>(n);
  const double exponent = -std::pow(nd, (params.p - 1.0) / params.p) * eps / params.c +
                          params.b_p * nu_p / std::pow(params.c, params.p);
  return std::min(1.0, std::exp(exponent));
}

}  // namespace heavytail
