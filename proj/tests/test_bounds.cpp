#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "heavytail/bounds.hpp"

using namespace heavytail;

namespace {

BoundInputs base_inputs() {
  BoundInputs in;
  in.p = 2.0;
  in.c = 1.0;
  in.num_arms = 2;
  in.horizon = 10000.0;
  in.gaps = {0.4};
  in.spec = PerturbationSpec::weibull(1.0, 1.0);
  return in;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("gap-dependent rate, exponential row") {
  BoundInputs in = base_inputs();
  // A = (3c lambda)^p / gap = 9/0.4, B = gap^2 = 0.16, factor = ln(BT)^{p/(k(p-1))}
  const double a_term = std::pow(std::pow(3.0, 2.0) / 0.4, 1.0);
  const double expected = a_term * std::pow(std::log(0.16 * in.horizon), 2.0);
  CHECK(gap_dependent_bound(in) == doctest::Approx(expected).epsilon(1e-12));

  in.gaps.clear();
  CHECK(gap_dependent_bound(in) == 0.0);

  // the sub-logarithmic regime clamps to zero instead of going negative
  in.gaps = {0.001};
  in.horizon = 100.0;  // B*T = 1e-4 < 1
  CHECK(gap_dependent_bound(in) == 0.0);
}

TEST_CASE("gap-dependent rate responds to the scale") {
  // doubling c inflates A by 2^{p/(p-1)} and shrinks ln(BT); the comparison
  // is made numerically at two scales
  BoundInputs lo = base_inputs();
  BoundInputs hi = base_inputs();
  hi.c = 2.0;
  const double ratio = gap_dependent_bound(hi) / gap_dependent_bound(lo);
  CHECK(ratio < std::pow(2.0, hi.p / (hi.p - 1.0)));
  CHECK(ratio > 1.0);
}

TEST_CASE("gap-dependent rate is nonincreasing in the gap (dominant-A regime)") {
  // polynomial rows flip direction once the tail is too heavy: the GEV case
  // needs zeta < (p-1)/p^2 and Pareto needs alpha > p^2/(p-1)
  const PerturbationSpec specs[] = {
      PerturbationSpec::weibull(1.0, 1.0),
      PerturbationSpec::gamma(1.0, 1.0),
      PerturbationSpec::gev(0.15, 1.5),
      PerturbationSpec::pareto(9.0, 9.0),
  };
  for (const auto& spec : specs) {
    BoundInputs in = base_inputs();
    in.p = 1.5;
    in.c = 0.1;
    in.horizon = 1e7;
    in.spec = spec;
    double prev = 1e308;
    for (double gap = 0.05; gap <= 0.5; gap += 0.05) {
      in.gaps = {gap};
      // restrict to the regime where the A-term dominates
      if (std::log(std::pow(gap / in.c, in.p / (in.p - 1.0)) * in.horizon) <=
          in.p / (in.p - 1.0)) {
        continue;
      }
      const double value = gap_dependent_bound(in);
      CHECK(value <= prev * (1.0 + 1e-12));
      prev = value;
    }
  }
}

TEST_CASE("gap-independent rate, exponential row") {
  BoundInputs in = base_inputs();
  in.num_arms = 2;
  in.horizon = 2.0;
  // C_{K,T} = 2^{1/2} 2^{1/2} = 2, K-factor = ln 2
  CHECK(gap_independent_bound(in) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

  // only C_{K,T} depends on T
  BoundInputs doubled = base_inputs();
  doubled.horizon = 2.0 * base_inputs().horizon;
  CHECK(gap_independent_bound(doubled) / gap_independent_bound(base_inputs()) ==
        doctest::Approx(std::pow(2.0, 1.0 / in.p)).epsilon(1e-12));

  BoundInputs bad = base_inputs();
  bad.num_arms = 1;
  CHECK_THROWS_AS(gap_independent_bound(bad), std::invalid_argument);
}

TEST_CASE("optimal parameters keep the ratio to the target rate bounded") {
  // ratio <= e^{p^2/(e(p-1)^2)} * e^{1/(p-1)}, the constants absorbed by the
  // tight-rate claim; checked with 5% slack
  for (const double p : {1.5, 2.0}) {
    const double cap =
        std::exp(p * p / (std::exp(1.0) * (p - 1.0) * (p - 1.0)) + 1.0 / (p - 1.0)) * 1.05;
    for (const auto kind : {PerturbKind::kWeibull, PerturbKind::kGamma, PerturbKind::kGev,
                            PerturbKind::kPareto, PerturbKind::kFrechet}) {
      for (const int k : {2, 8, 32, 128}) {
        for (const double t : {1e3, 1e5, 1e7}) {
          BoundInputs in;
          in.p = p;
          in.c = 1.0;
          in.num_arms = k;
          in.horizon = t;
          in.spec = optimal_params(kind, k);
          const double target = std::pow(static_cast<double>(k), 1.0 - 1.0 / p) *
                                std::pow(t, 1.0 / p) * std::log(static_cast<double>(k));
          CHECK(gap_independent_bound(in) / target <= cap);
        }
      }
    }
  }
}

TEST_CASE("index-policy lower rate") {
  CHECK(ucb_lower_rate(2, std::exp(2.0), 2.0) ==
        doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-12));
  // the rate approaches T as p -> 1+
  CHECK(ucb_lower_rate(2, 1000.0, 1.000001) == doctest::Approx(1000.0).epsilon(1e-2));
  // super-T^{1/p} growth between T and 2T
  const double p = 1.5;
  const double t = 500.0;
  const double ratio = ucb_lower_rate(4, 2.0 * t, p) / ucb_lower_rate(4, t, p);
  const double expected =
      std::pow(std::log(2.0 * t) / std::log(t), 1.0 - 1.0 / p) * std::pow(2.0, 1.0 / p);
  CHECK(ratio == doctest::Approx(expected).epsilon(1e-12));
  CHECK(ratio > std::pow(2.0, 1.0 / p));
  CHECK_THROWS_AS(ucb_lower_rate(1, 100.0, 1.5), std::invalid_argument);
}

TEST_CASE("perturbed-exploration lower rate") {
  const auto gumbel = PerturbationSpec::gumbel(1.0);
  // K = 2: quantile factor -ln ln 2
  CHECK(ape_lower_rate(2, 100.0, 2.0, gumbel) ==
        doctest::Approx(std::sqrt(2.0) * 10.0 * 0.36651292058166433).epsilon(1e-12));

  // Pareto at alpha = lambda = ln K: the K-quantile collapses to e ln K
  const int k = 8;
  const auto pareto = optimal_params(PerturbKind::kPareto, k);
  const double factor = inverse_cdf(pareto, 1.0 - 1.0 / k);
  CHECK(factor == doctest::Approx(std::exp(1.0) * std::log(8.0)).epsilon(1e-12));

  double prev = 0.0;
  for (const int arms : {2, 4, 8, 16, 32, 64}) {
    const double rate = ape_lower_rate(arms, 1000.0, 1.5, gumbel);
    CHECK(rate >= prev);
    prev = rate;
  }
}

}  // TEST_SUITE
