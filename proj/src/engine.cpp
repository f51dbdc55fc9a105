#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "heavytail/engine.hpp"

namespace heavytail {

namespace {

// Runs fn(0..count-1) over a small worker pool. Each index is an independent
// task writing into its own slot, so execution order never affects results.
void run_tasks(int threads, std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = static_cast<int>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Stats {
  double mean = 0.0;
  double std_dev = 0.0;
};

// Two-pass mean and sample standard deviation in slot order.
Stats aggregate(const std::vector<double>& values) {
  Stats s;
  const auto n = static_cast<double>(values.size());
  for (const double v : values) s.mean += v;
  s.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

}  // namespace

BanditInstance make_instance(const ExperimentConfig& config) {
  const InstanceConfig& inst = config.instance;
  switch (inst.type) {
    case InstanceConfig::Type::kGap:
      return make_gap_instance(inst.arms, inst.gap, inst.noise);
    case InstanceConfig::Type::kUcbCounterexample:
      return make_ucb_counterexample(inst.arms, config.horizon, inst.p, inst.nu, inst.eta);
    case InstanceConfig::Type::kApeCounterexample:
      return make_ape_counterexample(inst.arms, config.horizon, inst.p, inst.c,
                                     inst.perturbation);
  }
  throw ConfigError("make_instance: unknown instance type");
}

double resolve_nu_p(const PolicyConfig& config, const BanditInstance& instance) {
  if (config.nu_p) return *config.nu_p;
  if (instance.noise.kind != NoiseSpec::Kind::kParetoShifted) {
    throw ConfigError("config: nu_p must be given explicitly for noiseless instances");
  }
  double bound = 0.0;
  for (const double mean : instance.means) {
    bound = std::max(bound, nu_p_bound(instance.noise, mean, config.p));
  }
  return bound;
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const BanditInstance& instance) {
  const int num_arms = instance.num_arms();
  if (config.name == "ape2") {
    return std::make_unique<Ape2Policy>(num_arms, InfluenceParams::make(config.p, config.c),
                                        config.perturbation);
  }
  if (config.name == "robust_ucb") {
    return std::make_unique<RobustUcbPolicy>(num_arms, config.p, resolve_nu_p(config, instance),
                                             config.eta, config.c, config.ucb_estimator);
  }
  if (config.name == "dsee") {
    return std::make_unique<DseePolicy>(num_arms, config.w);
  }
  throw ConfigError("config: unknown bandit policy: " + config.name);
}

void check_trace_invariants(const RegretTrace& trace, const BanditInstance& instance) {
  const auto gaps = instance.gaps();
  const double max_gap = *std::max_element(gaps.begin(), gaps.end());
  double gap_sum = 0.0;
  for (const double g : gaps) gap_sum += g;

  double prev = 0.0;
  for (std::size_t t = 0; t < trace.cumulative.size(); ++t) {
    const double r = trace.cumulative[t];
    if (r < prev - 1e-12) throw std::runtime_error("trace invariant: cumulative regret decreased");
    const double cap = max_gap * static_cast<double>(t + 1);
    if (r > cap * (1.0 + 1e-12) + 1e-12) {
      throw std::runtime_error("trace invariant: regret exceeds t * max gap");
    }
    prev = r;
  }
  const auto k = static_cast<std::size_t>(instance.num_arms());
  if (trace.cumulative.size() >= k) {
    if (std::abs(trace.cumulative[k - 1] - gap_sum) > 1e-9) {
      throw std::runtime_error("trace invariant: regret after initialization != gap sum");
    }
  }
}

RegretTrace run_bandit_trial(const BanditInstance& instance, const PolicyConfig& policy_config,
                             long horizon, std::uint64_t seed, int policy_id, long trial_index) {
  const int num_arms = instance.num_arms();
  if (horizon < num_arms) throw ConfigError("run_bandit_trial: horizon below arm count");
  auto policy = make_policy(policy_config, instance);
  CounterRng reward_rng(seed, static_cast<std::uint64_t>(trial_index),
                        static_cast<std::uint64_t>(policy_id), StreamTag::kReward);
  CounterRng perturb_rng(seed, static_cast<std::uint64_t>(trial_index),
                         static_cast<std::uint64_t>(policy_id), StreamTag::kPerturbation);
  const auto gaps = instance.gaps();

  RegretTrace trace;
  trace.cumulative.resize(horizon);
  double cumulative = 0.0;
  for (long t = 1; t <= horizon; ++t) {
    const int arm = (t <= num_arms) ? static_cast<int>(t - 1) : policy->select(t, perturb_rng);
    const double u = reward_rng.next_open01();
    const double reward = draw_reward(instance, arm, u);
    policy->update(arm, reward, t);
    cumulative += gaps[arm];
    trace.cumulative[t - 1] = cumulative;
  }

  long total_pulls = 0;
  for (int a = 0; a < num_arms; ++a) {
    total_pulls += policy->pull_count(a);
    if (policy->pull_count(a) != static_cast<long>(policy->history(a).size())) {
      throw std::runtime_error("policy invariant: history length != pull count");
    }
  }
  if (total_pulls != horizon) {
    throw std::runtime_error("policy invariant: pull counts do not sum to the round count");
  }
  check_trace_invariants(trace, instance);
  return trace;
}

std::vector<OutputRow> run_bandit_experiment(const ExperimentConfig& raw) {
  ExperimentConfig config = raw;
  finalize_config(config);
  const BanditInstance instance = make_instance(config);
  const auto rounds = logged_rounds(config.horizon, config.max_logged_rounds);
  std::vector<OutputRow> rows;

  for (std::size_t policy_id = 0; policy_id < config.policies.size(); ++policy_id) {
    const PolicyConfig& policy = config.policies[policy_id];
    std::vector<RegretTrace> traces(config.runs);
    run_tasks(config.threads, traces.size(), [&](std::size_t trial) {
      traces[trial] = run_bandit_trial(instance, policy, config.horizon, config.seed,
                                       static_cast<int>(policy_id), static_cast<long>(trial));
    });
    const std::string label = policy.display();
    std::vector<double> values(traces.size());
    for (const long t : rounds) {
      for (std::size_t i = 0; i < traces.size(); ++i) {
        values[i] = traces[i].cumulative[t - 1] / static_cast<double>(t);
      }
      const Stats s = aggregate(values);
      rows.push_back(OutputRow{t, label, "regret_avg", s.mean, s.std_dev, config.runs});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Estimator-convergence mode

namespace {

// Evaluates one estimator on a growing sample prefix. The influence and
// truncated-mean variants keep |Y|^p cached / folded into a running sum so a
// full convergence sweep stays O(T) or O(T log T) instead of O(T^2) pow calls.
class PrefixEstimator {
 public:
  virtual ~PrefixEstimator() = default;
  virtual void add(double y) = 0;
  virtual double current() const = 0;
};

class SampleMeanPrefix : public PrefixEstimator {
 public:
  void add(double y) override {
    sum_ += y;
    ++n_;
  }
  double current() const override { return sum_ / static_cast<double>(n_); }

 private:
  double sum_ = 0.0;
  std::size_t n_ = 0;
};

class TruncatedMeanPrefix : public PrefixEstimator {
 public:
  TruncatedMeanPrefix(double p, double nu_p, double delta)
      : p_(p), nu_p_(nu_p), log_inv_delta_(std::log(1.0 / delta)) {}
  void add(double y) override {
    ++n_;
    // survives iff |y|^p <= nu_p * i / ln(1/delta); fixed delta makes the
    // truncated sum incremental
    if (std::pow(std::abs(y), p_) * log_inv_delta_ <= nu_p_ * static_cast<double>(n_)) {
      sum_ += y;
    }
  }
  double current() const override { return sum_ / static_cast<double>(n_); }

 private:
  double p_;
  double nu_p_;
  double log_inv_delta_;
  double sum_ = 0.0;
  std::size_t n_ = 0;
};

class MedianOfMeansPrefix : public PrefixEstimator {
 public:
  explicit MedianOfMeansPrefix(double delta) : spec_(EstimatorSpec::median_of_means(delta)) {}
  void add(double y) override { values_.push_back(y); }
  double current() const override { return estimate(spec_, values_); }

 private:
  EstimatorSpec spec_;
  std::vector<double> values_;
};

class PRobustPrefix : public PrefixEstimator {
 public:
  PRobustPrefix(double p, double c) : params_(InfluenceParams::make(p, c)) {}
  void add(double y) override {
    values_.push_back(y);
    moments_.push_back(std::pow(std::abs(y), params_.p));
  }
  double current() const override {
    return p_robust_estimate_cached(params_, values_, moments_, values_.size());
  }

 private:
  InfluenceParams params_;
  std::vector<double> values_;
  std::vector<double> moments_;
};

std::unique_ptr<PrefixEstimator> make_prefix_estimator(const PolicyConfig& config,
                                                       const NoiseSpec& noise, double true_mean) {
  const EstimatorKind kind = estimator_kind_from_name(config.name);
  switch (kind) {
    case EstimatorKind::kSampleMean:
      return std::make_unique<SampleMeanPrefix>();
    case EstimatorKind::kTruncatedMean: {
      const double nu = config.nu_p ? *config.nu_p : nu_p_bound(noise, true_mean, config.p);
      return std::make_unique<TruncatedMeanPrefix>(config.p, nu, config.delta);
    }
    case EstimatorKind::kMedianOfMeans:
      return std::make_unique<MedianOfMeansPrefix>(config.delta);
    case EstimatorKind::kPRobust:
      return std::make_unique<PRobustPrefix>(config.p, config.c);
  }
  throw ConfigError("config: unknown estimator: " + config.name);
}

bool is_estimator_name(const std::string& name) {
  return name == "sample_mean" || name == "truncated_mean" || name == "median_of_means" ||
         name == "p_robust";
}

double observation(const NoiseSpec& noise, double true_mean, CounterRng& rng) {
  if (noise.kind == NoiseSpec::Kind::kNoiseless) return true_mean;
  const double u = rng.next_open01();
  const double z = noise.lambda * std::exp(-std::log1p(-u) / noise.alpha);
  return true_mean + (z - noise.pareto_mean());
}

}  // namespace

std::vector<OutputRow> run_estimator_convergence(const ExperimentConfig& raw) {
  ExperimentConfig config = raw;
  finalize_config(config);
  for (const auto& policy : config.policies) {
    if (!is_estimator_name(policy.name)) {
      throw ConfigError("config: estimator mode expects estimator entries, got: " + policy.name);
    }
  }
  const auto rounds = logged_rounds(config.horizon, config.max_logged_rounds);
  const std::size_t num_estimators = config.policies.size();

  // errors[run][estimator][logged round]
  std::vector<std::vector<std::vector<double>>> errors(config.runs);
  run_tasks(config.threads, errors.size(), [&](std::size_t run) {
    // one shared observation stream per run, evaluated by every estimator
    CounterRng rng(config.seed, run, 0, StreamTag::kEstimatorNoise);
    std::vector<std::unique_ptr<PrefixEstimator>> estimators;
    estimators.reserve(num_estimators);
    for (const auto& policy : config.policies) {
      estimators.push_back(make_prefix_estimator(policy, config.instance.noise, config.true_mean));
    }
    auto& out = errors[run];
    out.assign(num_estimators, {});
    for (auto& e : out) e.reserve(rounds.size());
    std::size_t next_logged = 0;
    for (long t = 1; t <= config.horizon; ++t) {
      const double y = observation(config.instance.noise, config.true_mean, rng);
      for (auto& est : estimators) est->add(y);
      if (next_logged < rounds.size() && rounds[next_logged] == t) {
        for (std::size_t e = 0; e < num_estimators; ++e) {
          out[e].push_back(std::abs(estimators[e]->current() - config.true_mean));
        }
        ++next_logged;
      }
    }
  });

  std::vector<OutputRow> rows;
  std::vector<double> values(config.runs);
  for (std::size_t e = 0; e < num_estimators; ++e) {
    const std::string label = config.policies[e].display();
    for (std::size_t r = 0; r < rounds.size(); ++r) {
      for (int run = 0; run < config.runs; ++run) values[run] = errors[run][e][r];
      const Stats s = aggregate(values);
      rows.push_back(OutputRow{rounds[r], label, "est_error", s.mean, s.std_dev, config.runs});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Grid search

namespace {

const char* grid_parameter_for(const std::string& name) {
  if (name == "ape2" || name == "robust_ucb" || name == "p_robust") return "c";
  if (name == "dsee") return "w";
  throw ConfigError("config: policy '" + name + "' has no grid-searchable parameter");
}

PolicyConfig with_parameter(const PolicyConfig& base, const char* parameter, double value) {
  PolicyConfig p = base;
  if (std::string(parameter) == "c") {
    p.c = value;
  } else {
    p.w = value;
  }
  return p;
}

}  // namespace

std::vector<GridResult> grid_search(const ExperimentConfig& raw) {
  ExperimentConfig config = raw;
  finalize_config(config);
  const std::vector<double> grid = config.grid.empty() ? default_search_grid() : config.grid;
  if (grid.empty()) throw ConfigError("config: empty hyperparameter grid");

  bool estimator_mode = true;
  bool bandit_mode = true;
  for (const auto& policy : config.policies) {
    if (is_estimator_name(policy.name)) {
      bandit_mode = false;
    } else {
      estimator_mode = false;
    }
  }
  if (!estimator_mode && !bandit_mode) {
    throw ConfigError("config: grid search cannot mix bandit policies and estimators");
  }

  const long horizon = config.grid_horizon;
  const int runs = config.grid_runs;
  std::vector<GridResult> results;

  for (std::size_t policy_id = 0; policy_id < config.policies.size(); ++policy_id) {
    const PolicyConfig& base = config.policies[policy_id];
    const char* parameter = bandit_mode ? grid_parameter_for(base.name) : "c";
    // final-score matrix: scores_raw[value_index * runs + trial]
    std::vector<double> scores_raw(grid.size() * static_cast<std::size_t>(runs));

    if (bandit_mode) {
      const BanditInstance instance = make_instance(config);
      run_tasks(config.threads, scores_raw.size(), [&](std::size_t task) {
        const std::size_t value_index = task / runs;
        const long trial = static_cast<long>(task % runs);
        const PolicyConfig tuned = with_parameter(base, parameter, grid[value_index]);
        const RegretTrace trace = run_bandit_trial(instance, tuned, horizon, config.seed,
                                                   static_cast<int>(policy_id), trial);
        scores_raw[task] = trace.final_regret() / static_cast<double>(horizon);
      });
    } else {
      if (base.name != "p_robust") {
        throw ConfigError("config: estimator grid search tunes p_robust's c; got " + base.name);
      }
      run_tasks(config.threads, scores_raw.size(), [&](std::size_t task) {
        const std::size_t value_index = task / runs;
        const auto trial = static_cast<std::uint64_t>(task % runs);
        const PolicyConfig tuned = with_parameter(base, parameter, grid[value_index]);
        CounterRng rng(config.seed, trial, 0, StreamTag::kEstimatorNoise);
        auto est = make_prefix_estimator(tuned, config.instance.noise, config.true_mean);
        for (long t = 1; t <= horizon; ++t) {
          est->add(observation(config.instance.noise, config.true_mean, rng));
        }
        scores_raw[task] = std::abs(est->current() - config.true_mean);
      });
    }

    GridResult result;
    result.policy = base.display();
    result.parameter = parameter;
    result.values = grid;
    result.scores.resize(grid.size());
    for (std::size_t v = 0; v < grid.size(); ++v) {
      double sum = 0.0;
      for (int trial = 0; trial < runs; ++trial) {
        sum += scores_raw[v * static_cast<std::size_t>(runs) + trial];
      }
      result.scores[v] = sum / runs;
    }
    std::size_t best = 0;
    for (std::size_t v = 1; v < grid.size(); ++v) {
      if (result.scores[v] < result.scores[best]) best = v;
    }
    result.best_value = grid[best];
    result.best_score = result.scores[best];
    results.push_back(std::move(result));
  }
  return results;
}

std::vector<OutputRow> grid_rows(const std::vector<GridResult>& results,
                                 const ExperimentConfig& config) {
  const bool estimator_mode =
      !config.policies.empty() && is_estimator_name(config.policies.front().name);
  std::vector<OutputRow> rows;
  for (const auto& result : results) {
    for (std::size_t v = 0; v < result.values.size(); ++v) {
      char label[160];
      std::snprintf(label, sizeof(label), "%s[%s=%g]", result.policy.c_str(),
                    result.parameter.c_str(), result.values[v]);
      rows.push_back(OutputRow{config.grid_horizon > 0 ? config.grid_horizon : config.horizon,
                               label, estimator_mode ? "est_error" : "regret_avg",
                               result.scores[v], 0.0,
                               config.grid_runs > 0 ? config.grid_runs : config.runs});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Check and bounds modes

std::vector<CheckRow> run_assumption_checks(const ExperimentConfig& raw) {
  ExperimentConfig config = raw;
  finalize_config(config);
  std::vector<PerturbationSpec> specs = config.check_specs;
  if (specs.empty()) {
    specs = {PerturbationSpec::weibull(1.0, 2.0), PerturbationSpec::gamma(1.0, 2.0),
             PerturbationSpec::gumbel(1.5), PerturbationSpec::pareto(3.0, 3.0),
             PerturbationSpec::frechet(3.0, 3.0)};
  }
  std::vector<CheckRow> rows;
  rows.reserve(specs.size());
  for (const auto& spec : specs) rows.push_back(CheckRow{spec, check_assumption2(spec)});
  return rows;
}

std::vector<BoundsRow> run_bounds(const ExperimentConfig& raw) {
  ExperimentConfig config = raw;
  finalize_config(config);
  const PerturbKind kinds[] = {PerturbKind::kWeibull, PerturbKind::kGamma, PerturbKind::kGev,
                               PerturbKind::kPareto, PerturbKind::kFrechet};
  std::vector<BoundsRow> rows;
  for (const PerturbKind kind : kinds) {
    for (const int arms : config.bounds_arms) {
      const PerturbationSpec spec = optimal_params(kind, arms);
      for (const double horizon : config.bounds_horizons) {
        BoundInputs in;
        in.p = config.bounds_p;
        in.c = config.bounds_c;
        in.num_arms = arms;
        in.horizon = horizon;
        in.gaps.assign(arms - 1, config.instance.gap);
        in.spec = spec;
        BoundsRow row;
        row.family = perturb_kind_name(kind);
        row.arms = arms;
        row.horizon = horizon;
        row.p = in.p;
        row.c = in.c;
        row.gap = config.instance.gap;
        row.gap_dependent = gap_dependent_bound(in);
        row.gap_independent = gap_independent_bound(in);
        row.ape_lower = ape_lower_rate(arms, horizon, in.p, spec);
        row.ucb_lower = ucb_lower_rate(arms, horizon, in.p);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string run_experiment(const ExperimentConfig& raw) {
  ExperimentConfig config = raw;
  finalize_config(config);
  std::ostringstream out;
  switch (config.mode) {
    case Mode::kBandit:
      write_rows_csv(out, run_bandit_experiment(config));
      break;
    case Mode::kEstimatorConvergence:
      write_rows_csv(out, run_estimator_convergence(config));
      break;
    case Mode::kGridSearch: {
      const auto results = grid_search(config);
      write_rows_csv(out, grid_rows(results, config));
      for (const auto& result : results) {
        std::cerr << result.policy << ": best " << result.parameter << " = " << result.best_value
                  << " (score " << result.best_score << ")\n";
      }
      break;
    }
    case Mode::kCheck:
      write_check_csv(out, run_assumption_checks(config));
      break;
    case Mode::kBounds:
      write_bounds_csv(out, run_bounds(config));
      break;
  }
  const std::string text = out.str();
  if (config.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(config.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + config.output);
    file << text;
    if (!file) throw std::runtime_error("write failure on output file: " + config.output);
  }
  return text;
}

}  // namespace heavytail
