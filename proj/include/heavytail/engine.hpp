#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heavytail/bandit.hpp"
#include "heavytail/bounds.hpp"
#include "heavytail/estimators.hpp"
#include "heavytail/perturbations.hpp"
#include "heavytail/policies.hpp"

namespace heavytail {

// Configuration problems (bad JSON, invalid parameters) map to exit code 1;
// anything else that throws maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { kEstimatorConvergence, kBandit, kGridSearch, kCheck, kBounds };

const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

// One policy (bandit modes) or one estimator under test (estimator mode).
struct PolicyConfig {
  std::string name;   // ape2 | robust_ucb | dsee | sample_mean | truncated_mean |
                      // median_of_means | p_robust
  std::string label;  // column label; defaults to name plus key parameters

  double p = 1.5;
  double c = 1.0;  // ape2 / robust_ucb confidence scale / p_robust scale
  PerturbationSpec perturbation{PerturbKind::kGev, 0.0, 1.0};  // ape2
  double eta = 4.0;                                            // robust_ucb
  std::optional<double> nu_p;  // robust_ucb / truncated_mean; derived from the
                               // noise model when absent
  EstimatorKind ucb_estimator = EstimatorKind::kTruncatedMean;
  double w = 1.0;      // dsee exploration multiplier
  double delta = 0.01;  // truncated_mean / median_of_means confidence level

  std::string display() const;
};

struct InstanceConfig {
  enum class Type { kGap, kUcbCounterexample, kApeCounterexample };
  Type type = Type::kGap;
  int arms = 10;
  double gap = 0.1;
  NoiseSpec noise = NoiseSpec::pareto_shifted(1.55, 1.0);
  // counterexample parameters
  double p = 1.5;
  double nu = 1.0;
  double eta = 1.0;
  double c = 0.25;
  PerturbationSpec perturbation{PerturbKind::kGev, 0.0, 1.0};
};

struct ExperimentConfig {
  Mode mode = Mode::kBandit;
  InstanceConfig instance;
  std::vector<PolicyConfig> policies;
  long horizon = 0;  // defaults: 100000 (bandit), 5000 (estimator convergence)
  int runs = 0;      // defaults: 40 (bandit), 60 (estimator convergence)
  std::uint64_t seed = 12345;
  std::string output;  // empty writes to stdout
  int threads = 0;     // 0 uses the hardware concurrency
  int max_logged_rounds = 2000;
  double true_mean = 1.0;  // estimator-convergence target y

  std::vector<double> grid;  // empty selects the 62-point default
  long grid_horizon = 0;     // 0 falls back to `horizon`
  int grid_runs = 0;         // 0 falls back to `runs`

  std::vector<PerturbationSpec> check_specs;  // empty selects the canonical set
  std::vector<int> bounds_arms{2, 8, 32, 128};
  std::vector<double> bounds_horizons{1e3, 1e5, 1e7};
  double bounds_p = 1.5;
  double bounds_c = 1.0;
};

ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);
// Fills mode-dependent defaults and validates cross-field constraints.
void finalize_config(ExperimentConfig& config);

// Hyperparameter grid from the grid-search protocol: [0.1, 5.0] split into 50
// steps, [0.01, 0.1] into 10, plus {0.005, 0.001} -- 62 points total.
std::vector<double> default_search_grid();

// Log-spaced subset of 1..horizon (at most max_points entries, always
// containing 1 and horizon) at which traces are recorded.
std::vector<long> logged_rounds(long horizon, int max_points);

struct RegretTrace {
  std::vector<double> cumulative;  // cumulative pseudo-regret per round

  double final_regret() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

// Checks the trace invariants (nondecreasing, bounded by t * max gap, equals
// the gap sum right after initialization). Throws on violation.
void check_trace_invariants(const RegretTrace& trace, const BanditInstance& instance);

BanditInstance make_instance(const ExperimentConfig& config);
std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const BanditInstance& instance);
// nu_p used by confidence bounds / truncation: explicit value if configured,
// otherwise the moment bound maximized over the instance's arm means.
double resolve_nu_p(const PolicyConfig& config, const BanditInstance& instance);

// Plays `horizon` rounds of one trial: rounds 1..K pull each arm once, later
// rounds ask the policy. All randomness is derived from
// (seed, trial_index, policy_id, stream tag), so identical inputs produce
// bit-identical traces.
RegretTrace run_bandit_trial(const BanditInstance& instance, const PolicyConfig& policy,
                             long horizon, std::uint64_t seed, int policy_id, long trial_index);

// One CSV record of the aggregated output.
struct OutputRow {
  long round;
  std::string policy;
  std::string metric;  // regret_avg | est_error
  double mean;
  double std_dev;
  int runs;
};

// Bandit experiment: `runs` trials per policy (parallelized over trials),
// aggregated into per-round mean and standard deviation of R_t/t at the
// logged rounds. Aggregation order is fixed by trial index, so serial and
// parallel execution emit identical bytes.
std::vector<OutputRow> run_bandit_experiment(const ExperimentConfig& config);

// Estimator-convergence experiment: streams Y_t = y + noise and records
// |estimate(prefix) - y| per estimator at the logged rounds.
std::vector<OutputRow> run_estimator_convergence(const ExperimentConfig& config);

struct GridResult {
  std::string policy;
  std::string parameter;  // c or w
  std::vector<double> values;
  std::vector<double> scores;  // final mean R_T/T or final mean |error|
  double best_value = 0.0;
  double best_score = 0.0;
};

// Grid search over each policy's tunable parameter; score is the final mean
// R_T/T (bandit) or final mean absolute error (estimator mode) over
// grid_runs trials at grid_horizon rounds.
std::vector<GridResult> grid_search(const ExperimentConfig& config);
std::vector<OutputRow> grid_rows(const std::vector<GridResult>& results,
                                 const ExperimentConfig& config);

struct CheckRow {
  PerturbationSpec spec;
  Assumption2Report report;
};
std::vector<CheckRow> run_assumption_checks(const ExperimentConfig& config);

struct BoundsRow {
  std::string family;
  int arms;
  double horizon;
  double p;
  double c;
  double gap;
  double gap_dependent;
  double gap_independent;
  double ape_lower;
  double ucb_lower;
};
std::vector<BoundsRow> run_bounds(const ExperimentConfig& config);

void write_rows_csv(std::ostream& os, const std::vector<OutputRow>& rows);
void write_check_csv(std::ostream& os, const std::vector<CheckRow>& rows);
void write_bounds_csv(std::ostream& os, const std::vector<BoundsRow>& rows);

// Dispatches on config.mode, writes the CSV to config.output (stdout when
// empty), and returns the emitted text.
std::string run_experiment(const ExperimentConfig& config);

}  // namespace heavytail
