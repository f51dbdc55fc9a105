#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "heavytail/engine.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string output;
  std::int64_t seed = -1;
  int runs = 0;
  long horizon = 0;
  int threads = -1;
};

void add_common_flags(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment configuration");
  cmd->add_option("--out", opts.output, "output CSV path (stdout when omitted)");
  cmd->add_option("--seed", opts.seed, "base seed (overrides config)");
  cmd->add_option("--runs", opts.runs, "independent runs (overrides config)");
  cmd->add_option("--horizon", opts.horizon, "rounds per run (overrides config)");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
}

int run_mode(heavytail::Mode mode, const CliOptions& opts) {
  heavytail::ExperimentConfig config;
  if (!opts.config_path.empty()) config = heavytail::load_config_file(opts.config_path);
  config.mode = mode;
  if (!opts.output.empty()) config.output = opts.output;
  if (opts.seed >= 0) config.seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.runs > 0) config.runs = opts.runs;
  if (opts.horizon > 0) config.horizon = opts.horizon;
  if (opts.threads >= 0) config.threads = opts.threads;

  heavytail::run_experiment(config);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed bandit simulation harness"};
  app.require_subcommand(1);

  CliOptions opts;
  const struct {
    const char* name;
    const char* help;
    heavytail::Mode mode;
  } subcommands[] = {
      {"estimators", "mean-estimator convergence experiment", heavytail::Mode::kEstimatorConvergence},
      {"bandit", "bandit regret experiment", heavytail::Mode::kBandit},
      {"grid", "hyperparameter grid search", heavytail::Mode::kGridSearch},
      {"check", "perturbation assumption checks", heavytail::Mode::kCheck},
      {"bounds", "closed-form regret-rate table", heavytail::Mode::kBounds},
  };
  for (const auto& sub : subcommands) {
    add_common_flags(app.add_subcommand(sub.name, sub.help), opts);
  }

  CLI11_PARSE(app, argc, argv);

  heavytail::Mode mode = heavytail::Mode::kBandit;
  for (const auto& sub : subcommands) {
    if (app.got_subcommand(sub.name)) mode = sub.mode;
  }

  try {
    return run_mode(mode, opts);
  } catch (const heavytail::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
