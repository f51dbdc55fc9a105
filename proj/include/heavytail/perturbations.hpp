#pragma once

#include <optional>
#include <string>
#include <vector>

namespace heavytail {

enum class PerturbKind { kWeibull, kGamma, kGev, kPareto, kFrechet };

const char* perturb_kind_name(PerturbKind kind);
PerturbKind perturb_kind_from_name(const std::string& name);  // accepts "gumbel" as GEV(0)

// One of the five perturbation families. `shape` is k for Weibull, alpha for
// Gamma/Pareto/Frechet, zeta for GEV; `scale` is lambda throughout.
struct PerturbationSpec {
  PerturbKind kind;
  double shape;
  double scale;

  static PerturbationSpec weibull(double k, double lambda);
  static PerturbationSpec gamma(double alpha, double lambda);
  static PerturbationSpec gev(double zeta, double lambda);
  static PerturbationSpec gumbel(double lambda);  // GEV with zeta = 0
  static PerturbationSpec pareto(double alpha, double lambda);
  static PerturbationSpec frechet(double alpha, double lambda);

  std::string label() const;
};

// Hard parameter validation (positivity, zeta in [0,1)). Throws on failure.
void validate(const PerturbationSpec& spec);

// Soft checks against the regime the regret analysis assumes. Violations are
// reported, not rejected, so off-theory parameters stay explorable. The moment
// order enables the Pareto/Frechet alpha > p^2/(p-1) check.
std::vector<std::string> theory_warnings(const PerturbationSpec& spec,
                                         std::optional<double> p = std::nullopt);

double cdf(const PerturbationSpec& spec, double x);
double survival(const PerturbationSpec& spec, double x);  // 1 - cdf, computed stably
double log_survival(const PerturbationSpec& spec, double x);  // ln(1 - cdf), tail-safe

// Quantile function on the open interval (0,1). Closed form everywhere except
// Gamma, which is inverted numerically to |cdf(q)-y| <= 1e-12.
double inverse_cdf(const PerturbationSpec& spec, double y);

// Inverse-transform sampling: deterministic given the uniform variate u.
double sample(const PerturbationSpec& spec, double u);

// Hazard rate f(x)/(1-F(x)) on the interior of the support.
double hazard(const PerturbationSpec& spec, double x);

// Lower edge of the support (-inf for the Gumbel case).
double support_lower(const PerturbationSpec& spec);

// Generalized logarithm (x^zeta - 1)/zeta, with the zeta -> 0 limit ln(x).
double ln_zeta(double zeta, double x);

struct Assumption2Report {
  double f_zero = 0.0;
  bool f_zero_ok = false;      // F(0) <= 1/2
  bool log_concave_ok = false;  // ln F concave on the bulk of the support
  double integral_C = 0.0;      // numeric int_0^inf h(x) e^{-x} / (1-F(x)) dx; +inf when divergent
  std::optional<double> integral_bound;  // closed-form bound when one exists
  bool integral_ok = false;
  double sup_hazard = 0.0;  // numeric sup over the checked grid, informational

  bool all_ok() const { return f_zero_ok && log_concave_ok && integral_ok; }
};

// Verifies the anti-concentration hypotheses mechanically: F(0) <= 1/2,
// log-concavity of F by second finite differences on a 10^4-point grid over
// [q(1e-4), q(1-1e-4)], and the hazard-ratio integral by adaptive quadrature
// truncated where the integrand falls below 1e-12. Throws a runtime error
// with diagnostics if the quadrature fails to converge.
Assumption2Report check_assumption2(const PerturbationSpec& spec);

// Hyperparameters attaining each family's minimal gap-independent rate:
// Weibull (1,1), Gamma (1,1), GEV (0,1), Pareto/Frechet alpha=lambda=ln K.
// When p is given, out-of-regime K for Pareto/Frechet is reported through
// theory_warnings, never rejected.
PerturbationSpec optimal_params(PerturbKind kind, int num_arms);

namespace detail {
// Regularized lower incomplete gamma P(a, x): series for x < a+1, continued
// fraction otherwise.
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);
}  // namespace detail

}  // namespace heavytail
