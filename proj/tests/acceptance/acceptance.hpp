#pragma once

#include <string>

namespace acceptance {

// worker threads for the simulation-heavy criteria (0 = hardware)
extern int g_threads;

void report(int criterion, const std::string& name, bool pass, const std::string& detail);

bool criterion1_estimator_tail_bound();
bool criterion2_estimator_convergence();
bool criterion3_bandit_regret_ordering();
bool criterion4_ape_lower_bound();
bool criterion5_ucb_counterexample();
bool criterion6_assumption_suite();
bool criterion7_property_suites();
bool criterion8_optimal_rate_ratio();

}  // namespace acceptance
