#include "heavytail/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace heavytail {

namespace {

void check_inputs(const BoundInputs& in) {
  if (!(in.p > 1.0 && in.p <= 2.0)) throw std::invalid_argument("bounds: p must lie in (1,2]");
  if (!(in.c > 0.0)) throw std::invalid_argument("bounds: c must be positive");
  if (in.num_arms < 2) throw std::invalid_argument("bounds: need at least two arms");
  if (!(in.horizon >= in.num_arms)) throw std::invalid_argument("bounds: horizon below arm count");
  for (const double gap : in.gaps) {
    if (!(gap > 0.0 && gap <= 1.0)) throw std::invalid_argument("bounds: gaps must lie in (0,1]");
  }
}

}  // namespace

double gap_dependent_bound(const BoundInputs& in) {
  check_inputs(in);
  const double p = in.p;
  const double q = p / (p - 1.0);
  const double lambda = in.spec.scale;
  double total = 0.0;
  for (const double gap : in.gaps) {
    const double a_term = std::pow(std::pow(3.0 * in.c * lambda, p) / gap, 1.0 / (p - 1.0));
    const double bt = std::pow(gap / in.c, q) * in.horizon;
    if (bt <= 1.0) continue;  // sub-logarithmic regime, contribution clamped
    double factor = 0.0;
    switch (in.spec.kind) {
      case PerturbKind::kWeibull:
        factor = std::pow(std::log(bt), q / in.spec.shape);
        break;
      case PerturbKind::kGamma:
        factor = std::pow(in.spec.shape, q) * std::pow(std::log(bt), q);
        break;
      case PerturbKind::kGev:
        factor = std::pow(ln_zeta(in.spec.shape, bt), q);
        break;
      case PerturbKind::kPareto:
      case PerturbKind::kFrechet:
        factor = std::pow(bt, q / in.spec.shape);
        break;
    }
    total += a_term * factor;
  }
  return total;
}

double gap_independent_bound(const BoundInputs& in) {
  check_inputs(in);
  const double p = in.p;
  const double q = p / (p - 1.0);
  const double k = static_cast<double>(in.num_arms);
  const double c_kt = std::pow(k, 1.0 - 1.0 / p) * std::pow(in.horizon, 1.0 / p);
  double k_factor = 0.0;
  switch (in.spec.kind) {
    case PerturbKind::kWeibull:
      k_factor = std::pow(std::log(k), 1.0 / in.spec.shape);
      break;
    case PerturbKind::kGamma:
      k_factor = std::pow(std::log(in.spec.shape * std::pow(k, 1.0 + q)), q) /
                 std::pow(std::log(k), 1.0 / (p - 1.0));
      break;
    case PerturbKind::kGev:
      k_factor = std::pow(ln_zeta(in.spec.shape, std::pow(k, (2.0 * p - 1.0) / (p - 1.0))), q) /
                 std::pow(ln_zeta(in.spec.shape, k), 1.0 / (p - 1.0));
      break;
    case PerturbKind::kPareto:
    case PerturbKind::kFrechet: {
      const double alpha = in.spec.shape;
      k_factor = std::pow(alpha, 1.0 + p * p / (alpha * (p - 1.0) * (p - 1.0))) *
                 std::pow(k, 1.0 / (alpha * (p - 1.0)));
      break;
    }
  }
  return c_kt * k_factor;
}

double ucb_lower_rate(int num_arms, double horizon, double p) {
  if (num_arms < 2) throw std::invalid_argument("ucb_lower_rate: need at least two arms");
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("ucb_lower_rate: p must lie in (1,2]");
  if (!(horizon > 1.0)) throw std::invalid_argument("ucb_lower_rate: horizon must exceed 1");
  const double k = static_cast<double>(num_arms);
  return std::pow(k * std::log(horizon), 1.0 - 1.0 / p) * std::pow(horizon, 1.0 / p);
}

double ape_lower_rate(int num_arms, double horizon, double p, const PerturbationSpec& spec) {
  if (num_arms < 2) throw std::invalid_argument("ape_lower_rate: need at least two arms");
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("ape_lower_rate: p must lie in (1,2]");
  const double k = static_cast<double>(num_arms);
  const double quantile = inverse_cdf(spec, 1.0 - 1.0 / k);
  return std::pow(k, 1.0 - 1.0 / p) * std::pow(horizon, 1.0 / p) * quantile;
}

}  // namespace heavytail
