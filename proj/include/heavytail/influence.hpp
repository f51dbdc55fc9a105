#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace heavytail {

// Parameters of the influence-function estimator: moment order p in (1,2],
// the derived constant b_p and the scale c > 0.
struct InfluenceParams {
  double p;
  double b_p;
  double c;

  // Computes b_p from p and validates the ranges.
  static InfluenceParams make(double p, double c);
};

// Closed-form constant b_p; returns the analytic limit 1/2 at p = 2.
// Throws std::invalid_argument outside (1, 2].
double compute_bp(double p);

// Influence function: sign(x) * ln(b_p|x|^p + |x| + 1). Odd by construction,
// strictly increasing, and sub-linear in both tails.
double psi(const InfluenceParams& params, double x);

// Mean estimate (c/n^{1-1/p}) * sum_k psi(Y_k / (c n^{1/p})). The psi argument
// rescales with n, so the estimate is recomputed from the full history; there
// is no incremental form. n_override substitutes the count used in both the
// prefactor and the argument scaling.
double p_robust_estimate(const InfluenceParams& params, std::span<const double> samples,
                         std::optional<std::size_t> n_override = std::nullopt);

// Same estimate evaluated from cached |Y_k|^p values, avoiding a pow() per
// sample when the history is replayed many times. abs_pow_p[k] must equal
// |values[k]|^p.
double p_robust_estimate_cached(const InfluenceParams& params, std::span<const double> values,
                                std::span<const double> abs_pow_p, std::size_t n);

// One-sided deviation bound min(1, exp(-n^{(p-1)/p} eps / c + b_p nu_p / c^p)).
// The same expression bounds both tails.
double tail_bound(const InfluenceParams& params, std::size_t n, double eps, double nu_p);

}  // namespace heavytail
