// Acceptance suite: one self-contained check per claim the artifact must
// reproduce, each printing a single PASS/FAIL line (plus indented detail).
// Run all with no arguments or a subset by number: ./heavytail_acceptance 1 5 8

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance.hpp"

namespace acceptance {

int g_threads = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str());
  if (!detail.empty()) {
    std::istringstream lines(detail);
    std::string line;
    while (std::getline(lines, line)) std::printf("    %s\n", line.c_str());
  }
  std::fflush(stdout);
}

}  // namespace acceptance

int main(int argc, char** argv) {
  using namespace acceptance;
  if (const char* env = std::getenv("HEAVYTAIL_THREADS")) g_threads = std::atoi(env);

  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  auto selected = [&](int criterion) {
    return wanted.empty() || std::find(wanted.begin(), wanted.end(), criterion) != wanted.end();
  };

  int failures = 0;
  if (selected(1)) failures += !criterion1_estimator_tail_bound();
  if (selected(2)) failures += !criterion2_estimator_convergence();
  if (selected(3)) failures += !criterion3_bandit_regret_ordering();
  if (selected(4)) failures += !criterion4_ape_lower_bound();
  if (selected(5)) failures += !criterion5_ucb_counterexample();
  if (selected(6)) failures += !criterion6_assumption_suite();
  if (selected(7)) failures += !criterion7_property_suites();
  if (selected(8)) failures += !criterion8_optimal_rate_ratio();
  return failures;
}
