#include "heavytail/perturbations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace heavytail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail_domain(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

const char* perturb_kind_name(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::kWeibull: return "weibull";
    case PerturbKind::kGamma: return "gamma";
    case PerturbKind::kGev: return "gev";
    case PerturbKind::kPareto: return "pareto";
    case PerturbKind::kFrechet: return "frechet";
  }
  return "unknown";
}

PerturbKind perturb_kind_from_name(const std::string& name) {
  if (name == "weibull" || name == "exponential") return PerturbKind::kWeibull;
  if (name == "gamma") return PerturbKind::kGamma;
  if (name == "gev" || name == "gumbel") return PerturbKind::kGev;
  if (name == "pareto") return PerturbKind::kPareto;
  if (name == "frechet") return PerturbKind::kFrechet;
  fail_domain("unknown perturbation kind: " + name);
}

PerturbationSpec PerturbationSpec::weibull(double k, double lambda) {
  PerturbationSpec s{PerturbKind::kWeibull, k, lambda};
  validate(s);
  return s;
}
PerturbationSpec PerturbationSpec::gamma(double alpha, double lambda) {
  PerturbationSpec s{PerturbKind::kGamma, alpha, lambda};
  validate(s);
  return s;
}
PerturbationSpec PerturbationSpec::gev(double zeta, double lambda) {
  PerturbationSpec s{PerturbKind::kGev, zeta, lambda};
  validate(s);
  return s;
}
PerturbationSpec PerturbationSpec::gumbel(double lambda) { return gev(0.0, lambda); }
PerturbationSpec PerturbationSpec::pareto(double alpha, double lambda) {
  PerturbationSpec s{PerturbKind::kPareto, alpha, lambda};
  validate(s);
  return s;
}
PerturbationSpec PerturbationSpec::frechet(double alpha, double lambda) {
  PerturbationSpec s{PerturbKind::kFrechet, alpha, lambda};
  validate(s);
  return s;
}

std::string PerturbationSpec::label() const {
  // semicolon separator keeps the label usable as a CSV field
  std::ostringstream os;
  if (kind == PerturbKind::kGev && shape == 0.0) {
    os << "gumbel(" << scale << ")";
  } else {
    os << perturb_kind_name(kind) << "(" << shape << ";" << scale << ")";
  }
  return os.str();
}

void validate(const PerturbationSpec& spec) {
  if (!(spec.scale > 0.0)) fail_domain("perturbation scale must be positive");
  switch (spec.kind) {
    case PerturbKind::kWeibull:
      if (!(spec.shape > 0.0)) fail_domain("weibull shape k must be positive");
      break;
    case PerturbKind::kGamma:
      if (!(spec.shape > 0.0)) fail_domain("gamma shape alpha must be positive");
      break;
    case PerturbKind::kGev:
      if (!(spec.shape >= 0.0 && spec.shape < 1.0)) fail_domain("gev shape zeta must lie in [0,1)");
      break;
    case PerturbKind::kPareto:
    case PerturbKind::kFrechet:
      if (!(spec.shape > 0.0)) fail_domain("tail index alpha must be positive");
      break;
  }
}

std::vector<std::string> theory_warnings(const PerturbationSpec& spec, std::optional<double> p) {
  std::vector<std::string> warnings;
  const std::string name = spec.label();
  switch (spec.kind) {
    case PerturbKind::kWeibull:
      if (spec.shape > 1.0) warnings.push_back(name + ": regret analysis assumes k <= 1");
      if (!(spec.scale > 1.0)) warnings.push_back(name + ": hazard-integral bound assumes lambda > 1");
      break;
    case PerturbKind::kGamma:
      if (spec.shape < 1.0) warnings.push_back(name + ": regret analysis assumes alpha >= 1");
      if (!(spec.scale > 1.0)) warnings.push_back(name + ": hazard-integral bound assumes lambda > 1");
      break;
    case PerturbKind::kGev:
      if (!(spec.scale > 1.0)) warnings.push_back(name + ": hazard-integral bound assumes lambda > 1");
      break;
    case PerturbKind::kPareto:
    case PerturbKind::kFrechet:
      if (p) {
        const double threshold = (*p) * (*p) / (*p - 1.0);
        if (!(spec.shape > threshold)) {
          warnings.push_back(name + ": regret analysis assumes alpha > p^2/(p-1)");
        }
      }
      if (spec.scale < spec.shape) warnings.push_back(name + ": regret analysis assumes lambda >= alpha");
      break;
  }
  return warnings;
}

double support_lower(const PerturbationSpec& spec) {
  switch (spec.kind) {
    case PerturbKind::kWeibull:
    case PerturbKind::kGamma:
    case PerturbKind::kFrechet:
      return 0.0;
    case PerturbKind::kGev:
      return spec.shape > 0.0 ? -spec.scale / spec.shape : -kInf;
    case PerturbKind::kPareto:
      return spec.scale;
  }
  return -kInf;
}

namespace detail {

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) fail_domain("reg_lower_gamma: a must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) {
    // series expansion around 0
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  return 1.0 - reg_upper_gamma(a, x);
}

namespace {

// modified Lentz continued fraction for Q(a, x), valid for x >= a + 1
double upper_gamma_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double reg_upper_gamma(double a, double x) {
  if (!(a > 0.0)) fail_domain("reg_upper_gamma: a must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - reg_lower_gamma(a, x);
  return upper_gamma_cf(a, x) * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double log_reg_upper_gamma(double a, double x) {
  if (!(a > 0.0)) fail_domain("log_reg_upper_gamma: a must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return std::log1p(-reg_lower_gamma(a, x));
  return std::log(upper_gamma_cf(a, x)) - x + a * std::log(x) - std::lgamma(a);
}

}  // namespace detail

double cdf(const PerturbationSpec& spec, double x) {
  switch (spec.kind) {
    case PerturbKind::kWeibull:
      if (x <= 0.0) return 0.0;
      return -std::expm1(-std::pow(x / spec.scale, spec.shape));
    case PerturbKind::kGamma:
      if (x <= 0.0) return 0.0;
      return detail::reg_lower_gamma(spec.shape, x / spec.scale);
    case PerturbKind::kGev: {
      if (spec.shape == 0.0) return std::exp(-std::exp(-x / spec.scale));
      const double t = 1.0 + spec.shape * x / spec.scale;
      if (t <= 0.0) return 0.0;
      return std::exp(-std::pow(t, -1.0 / spec.shape));
    }
    case PerturbKind::kPareto:
      if (x <= spec.scale) return 0.0;
      return -std::expm1(-spec.shape * std::log(x / spec.scale));
    case PerturbKind::kFrechet:
      if (x <= 0.0) return 0.0;
      return std::exp(-std::pow(x / spec.scale, -spec.shape));
  }
  return 0.0;
}

double log_survival(const PerturbationSpec& spec, double x) {
  // ln(1-F) without constructing exponentially small intermediates; the
  // -expm1 forms collapse to log(u) once u would lose all precision anyway.
  constexpr double kLogTinyU = -37.0;  // u < 9e-17: -expm1(-u) == u in double
  switch (spec.kind) {
    case PerturbKind::kWeibull:
      if (x <= 0.0) return 0.0;
      return -std::pow(x / spec.scale, spec.shape);
    case PerturbKind::kGamma:
      if (x <= 0.0) return 0.0;
      return detail::log_reg_upper_gamma(spec.shape, x / spec.scale);
    case PerturbKind::kGev: {
      double log_u;
      if (spec.shape == 0.0) {
        log_u = -x / spec.scale;
      } else {
        const double t = 1.0 + spec.shape * x / spec.scale;
        if (t <= 0.0) return 0.0;
        log_u = -std::log(t) / spec.shape;
      }
      if (log_u < kLogTinyU) return log_u;
      return std::log(-std::expm1(-std::exp(log_u)));
    }
    case PerturbKind::kPareto:
      if (x <= spec.scale) return 0.0;
      return -spec.shape * std::log(x / spec.scale);
    case PerturbKind::kFrechet: {
      if (x <= 0.0) return 0.0;
      const double log_u = -spec.shape * std::log(x / spec.scale);
      if (log_u < kLogTinyU) return log_u;
      return std::log(-std::expm1(-std::exp(log_u)));
    }
  }
  return 0.0;
}

double survival(const PerturbationSpec& spec, double x) {
  switch (spec.kind) {
    case PerturbKind::kWeibull:
      if (x <= 0.0) return 1.0;
      return std::exp(-std::pow(x / spec.scale, spec.shape));
    case PerturbKind::kGamma:
      if (x <= 0.0) return 1.0;
      return detail::reg_upper_gamma(spec.shape, x / spec.scale);
    case PerturbKind::kGev: {
      if (spec.shape == 0.0) return -std::expm1(-std::exp(-x / spec.scale));
      const double t = 1.0 + spec.shape * x / spec.scale;
      if (t <= 0.0) return 1.0;
      return -std::expm1(-std::pow(t, -1.0 / spec.shape));
    }
    case PerturbKind::kPareto:
      if (x <= spec.scale) return 1.0;
      return std::pow(x / spec.scale, -spec.shape);
    case PerturbKind::kFrechet:
      if (x <= 0.0) return 1.0;
      return -std::expm1(-std::pow(x / spec.scale, -spec.shape));
  }
  return 1.0;
}

namespace {

double gamma_quantile(const PerturbationSpec& spec, double y) {
  // Bracketed bisection on the regularized lower incomplete gamma. The
  // initial upper bracket covers the mean plus ten standard deviations with
  // slack; it is doubled if the target still lies above.
  const double a = spec.shape;
  double lo = 0.0;
  double hi = spec.scale * (a + 10.0 * std::sqrt(a) + 10.0);
  for (int i = 0; i < 200 && cdf(spec, hi) < y; ++i) hi *= 2.0;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 500; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f = cdf(spec, mid);
    if (std::abs(f - y) <= 1e-12 || (hi - lo) <= 1e-15 * (1.0 + mid)) return mid;
    if (f < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace

double inverse_cdf(const PerturbationSpec& spec, double y) {
  if (!(y > 0.0 && y < 1.0)) fail_domain("inverse_cdf: y must lie in the open interval (0,1)");
  switch (spec.kind) {
    case PerturbKind::kWeibull:
      return spec.scale * std::pow(-std::log1p(-y), 1.0 / spec.shape);
    case PerturbKind::kGamma:
      return gamma_quantile(spec, y);
    case PerturbKind::kGev: {
      if (spec.shape == 0.0) return -spec.scale * std::log(-std::log(y));
      return spec.scale * (std::pow(-std::log(y), -spec.shape) - 1.0) / spec.shape;
    }
    case PerturbKind::kPareto:
      return spec.scale * std::exp(-std::log1p(-y) / spec.shape);
    case PerturbKind::kFrechet:
      return spec.scale * std::pow(-std::log(y), -1.0 / spec.shape);
  }
  fail_domain("inverse_cdf: unreachable");
}

double sample(const PerturbationSpec& spec, double u) { return inverse_cdf(spec, u); }

double hazard(const PerturbationSpec& spec, double x) {
  const double lo = support_lower(spec);
  if (!(x > lo)) fail_domain("hazard: x must lie in the interior of the support");
  switch (spec.kind) {
    case PerturbKind::kWeibull:
      // f/(1-F) collapses to the classical closed form.
      return (spec.shape / spec.scale) * std::pow(x / spec.scale, spec.shape - 1.0);
    case PerturbKind::kGamma: {
      // density over survival in log space; stable far into the tail
      const double z = x / spec.scale;
      const double log_f =
          (spec.shape - 1.0) * std::log(z) - z - std::lgamma(spec.shape) - std::log(spec.scale);
      return std::exp(log_f - detail::log_reg_upper_gamma(spec.shape, z));
    }
    case PerturbKind::kGev: {
      // u = -ln F(x); hazard = du e^{-u} / (1 - e^{-u}) -> du/u as u -> 0
      double log_u;
      double du_over_u;  // = du/u, finite everywhere on the support
      if (spec.shape == 0.0) {
        log_u = -x / spec.scale;
        du_over_u = 1.0 / spec.scale;
      } else {
        const double t = 1.0 + spec.shape * x / spec.scale;
        log_u = -std::log(t) / spec.shape;
        du_over_u = 1.0 / (spec.scale * t);
      }
      if (log_u < -37.0) return du_over_u;
      const double u = std::exp(log_u);
      return du_over_u * u * std::exp(-u) / (-std::expm1(-u));
    }
    case PerturbKind::kPareto:
      return spec.shape / x;
    case PerturbKind::kFrechet: {
      const double log_u = -spec.shape * std::log(x / spec.scale);
      const double du_over_u = spec.shape / x;
      if (log_u < -37.0) return du_over_u;
      const double u = std::exp(log_u);
      return du_over_u * u * std::exp(-u) / (-std::expm1(-u));
    }
  }
  fail_domain("hazard: unreachable");
}

double ln_zeta(double zeta, double x) {
  if (!(x > 0.0)) fail_domain("ln_zeta: x must be positive");
  if (!(zeta >= 0.0 && zeta < 1.0)) fail_domain("ln_zeta: zeta must lie in [0,1)");
  if (zeta == 0.0) return std::log(x);
  return (std::pow(x, zeta) - 1.0) / zeta;
}

namespace {

// Integrand of the anti-concentration condition. exp(-x)/(1-F) is combined
// in one exponential so slow-decaying cases never hit a spurious underflow.
double hazard_ratio_integrand(const PerturbationSpec& spec, double x) {
  return hazard(spec, x) * std::exp(-x - log_survival(spec, x));
}

struct QuadratureState {
  const PerturbationSpec& spec;
  int depth_exceeded = 0;
  long evaluations = 0;

  double f(double x) {
    ++evaluations;
    return hazard_ratio_integrand(spec, x);
  }
};

double adaptive_simpson(QuadratureState& st, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    ++st.depth_exceeded;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_hazard_ratio(const PerturbationSpec& spec) {
  QuadratureState st{spec};
  double a = std::max(support_lower(spec), 0.0);
  // Densities of some parameterizations blow up at the support edge
  // (integrably); nudge off the endpoint.
  a += 1e-12 * (1.0 + std::abs(a));

  // Truncate where the integrand has decayed below 1e-12. The exp(-x) factor
  // forces decay whenever the condition can hold at all.
  double b = std::max(a + 64.0, 64.0);
  const double cap = 1e7;
  while (b < cap && hazard_ratio_integrand(spec, b) >= 1e-12) b *= 2.0;
  if (hazard_ratio_integrand(spec, b) >= 1e-12) {
    // no decay within any reasonable window: the integral diverges and the
    // anti-concentration condition fails for these parameters
    return std::numeric_limits<double>::infinity();
  }

  // Piecewise panels keep the adaptive recursion shallow on [a, b].
  double total = 0.0;
  const int panels = 64;
  double prev = a;
  double fprev = st.f(prev);
  for (int i = 1; i <= panels; ++i) {
    // geometric spacing concentrates panels near the lower end
    const double t = static_cast<double>(i) / panels;
    double next = a + (b - a) * (std::pow(64.0, t) - 1.0) / 63.0;
    if (i == panels) next = b;
    const double fm = st.f(0.5 * (prev + next));
    const double fnext = st.f(next);
    const double whole = (next - prev) / 6.0 * (fprev + 4.0 * fm + fnext);
    total += adaptive_simpson(st, prev, next, fprev, fm, fnext, whole,
                              1e-11 * std::max(1.0, std::abs(whole)), 40);
    prev = next;
    fprev = fnext;
  }
  if (st.depth_exceeded > 0) {
    std::ostringstream os;
    os << "check_assumption2: quadrature for " << spec.label() << " failed to converge ("
       << st.depth_exceeded << " subintervals hit the depth cap after " << st.evaluations
       << " evaluations)";
    throw std::runtime_error(os.str());
  }
  return total;
}

std::optional<double> closed_form_integral_bound(const PerturbationSpec& spec) {
  switch (spec.kind) {
    case PerturbKind::kWeibull:
      if (spec.scale > 1.0) return std::pow(spec.scale - 1.0, -spec.shape);
      return std::nullopt;
    case PerturbKind::kGamma:
      if (spec.scale > 1.0) return std::pow(spec.scale - 1.0, -spec.shape);
      return std::nullopt;
    case PerturbKind::kGev:
      if (spec.scale > 1.0) return 2.0 / (spec.scale - 1.0);
      return std::nullopt;
    case PerturbKind::kPareto:
      return std::exp(std::lgamma(spec.shape + 1.0) - spec.shape * std::log(spec.scale));
    case PerturbKind::kFrechet:
      if (spec.scale >= spec.shape) return 4.0;
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Assumption2Report check_assumption2(const PerturbationSpec& spec) {
  validate(spec);
  Assumption2Report report;
  report.f_zero = cdf(spec, 0.0);
  report.f_zero_ok = report.f_zero <= 0.5;

  // Log-concavity of F via second finite differences of ln F on a uniform
  // grid spanning the central probability mass.
  const int grid_n = 10000;
  const double lo = inverse_cdf(spec, 1e-4);
  const double hi = inverse_cdf(spec, 1.0 - 1e-4);
  const double step = (hi - lo) / (grid_n - 1);
  std::vector<double> log_f(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    log_f[i] = std::log(cdf(spec, lo + step * i));
  }
  report.log_concave_ok = true;
  for (int i = 1; i + 1 < grid_n; ++i) {
    const double second = log_f[i + 1] - 2.0 * log_f[i] + log_f[i - 1];
    if (second > 1e-8) {
      report.log_concave_ok = false;
      break;
    }
  }

  const double interior_lo = std::max(support_lower(spec), lo);
  report.sup_hazard = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const double x = lo + step * i;
    if (x <= interior_lo) continue;
    report.sup_hazard = std::max(report.sup_hazard, hazard(spec, x));
  }

  report.integral_C = integrate_hazard_ratio(spec);
  report.integral_bound = closed_form_integral_bound(spec);
  if (report.integral_bound) {
    report.integral_ok = report.integral_C <= *report.integral_bound * (1.0 + 1e-3);
  } else {
    report.integral_ok = std::isfinite(report.integral_C);
  }
  return report;
}

PerturbationSpec optimal_params(PerturbKind kind, int num_arms) {
  if (num_arms < 2) fail_domain("optimal_params: need at least two arms");
  switch (kind) {
    case PerturbKind::kWeibull: return PerturbationSpec{kind, 1.0, 1.0};
    case PerturbKind::kGamma: return PerturbationSpec{kind, 1.0, 1.0};
    case PerturbKind::kGev: return PerturbationSpec{kind, 0.0, 1.0};
    case PerturbKind::kPareto:
    case PerturbKind::kFrechet: {
      const double a = std::log(static_cast<double>(num_arms));
      return PerturbationSpec{kind, a, a};
    }
  }
  fail_domain("optimal_params: unreachable");
}

}  // namespace heavytail
