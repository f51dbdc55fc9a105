#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "heavytail/engine.hpp"
#include "json.hpp"

namespace heavytail {

using nlohmann::json;

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::kEstimatorConvergence: return "estimators";
    case Mode::kBandit: return "bandit";
    case Mode::kGridSearch: return "grid";
    case Mode::kCheck: return "check";
    case Mode::kBounds: return "bounds";
  }
  return "unknown";
}

Mode mode_from_name(const std::string& name) {
  if (name == "estimators") return Mode::kEstimatorConvergence;
  if (name == "bandit") return Mode::kBandit;
  if (name == "grid") return Mode::kGridSearch;
  if (name == "check") return Mode::kCheck;
  if (name == "bounds") return Mode::kBounds;
  throw ConfigError("unknown mode: " + name);
}

std::string PolicyConfig::display() const {
  if (!label.empty()) return label;
  std::ostringstream os;
  if (name == "ape2") {
    os << "ape2-" << perturbation.label();
  } else if (name == "robust_ucb") {
    os << "robust_ucb-" << estimator_kind_name(ucb_estimator);
  } else {
    os << name;
  }
  return os.str();
}

namespace {

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError(std::string("config: missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

PerturbationSpec parse_perturbation(const json& j, int arms) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("config: perturbation needs a 'kind' field");
  }
  const std::string kind_name = j["kind"].get<std::string>();
  const PerturbKind kind = perturb_kind_from_name(kind_name);
  if (j.value("optimal", false)) return optimal_params(kind, arms);

  const double scale = j.value("lambda", j.value("scale", 1.0));
  double shape;
  switch (kind) {
    case PerturbKind::kWeibull:
      shape = (kind_name == "exponential") ? 1.0 : j.value("k", j.value("shape", 1.0));
      break;
    case PerturbKind::kGev:
      shape = (kind_name == "gumbel") ? 0.0 : j.value("zeta", j.value("shape", 0.0));
      break;
    default:
      shape = j.value("alpha", j.value("shape", 1.0));
      break;
  }
  PerturbationSpec spec{kind, shape, scale};
  validate(spec);
  return spec;
}

NoiseSpec parse_noise(const json& j) {
  if (j.is_null() || (j.is_object() && j.value("kind", "") == std::string("noiseless"))) {
    return NoiseSpec::noiseless();
  }
  if (!j.is_object()) throw ConfigError("config: 'noise' must be an object or null");
  return NoiseSpec::pareto_shifted(require_number(j, "alpha"), require_number(j, "lambda"));
}

PolicyConfig parse_policy(const json& j, int arms) {
  if (!j.is_object() || !j.contains("name")) {
    throw ConfigError("config: each policy entry needs a 'name'");
  }
  PolicyConfig p;
  p.name = j["name"].get<std::string>();
  p.label = j.value("label", "");
  p.p = j.value("p", p.p);
  p.c = j.value("c", p.c);
  p.eta = j.value("eta", p.eta);
  p.w = j.value("w", p.w);
  p.delta = j.value("delta", p.delta);
  if (j.contains("nu_p")) p.nu_p = j["nu_p"].get<double>();
  if (j.contains("estimator")) {
    p.ucb_estimator = estimator_kind_from_name(j["estimator"].get<std::string>());
  }
  if (j.contains("perturbation")) p.perturbation = parse_perturbation(j["perturbation"], arms);
  return p;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("mode")) cfg.mode = mode_from_name(j["mode"].get<std::string>());
    if (j.contains("instance")) {
      const json& inst = j["instance"];
      cfg.instance.arms = inst.value("arms", cfg.instance.arms);
      cfg.instance.gap = inst.value("gap", cfg.instance.gap);
      if (inst.contains("noise")) cfg.instance.noise = parse_noise(inst["noise"]);
      const std::string type = inst.value("type", "gap");
      if (type == "gap") {
        cfg.instance.type = InstanceConfig::Type::kGap;
      } else if (type == "ucb_counterexample") {
        cfg.instance.type = InstanceConfig::Type::kUcbCounterexample;
      } else if (type == "ape_counterexample") {
        cfg.instance.type = InstanceConfig::Type::kApeCounterexample;
      } else {
        throw ConfigError("config: unknown instance type: " + type);
      }
      cfg.instance.p = inst.value("p", cfg.instance.p);
      cfg.instance.nu = inst.value("nu", cfg.instance.nu);
      cfg.instance.eta = inst.value("eta", cfg.instance.eta);
      cfg.instance.c = inst.value("c", cfg.instance.c);
      if (inst.contains("perturbation")) {
        cfg.instance.perturbation = parse_perturbation(inst["perturbation"], cfg.instance.arms);
      }
    }
    if (j.contains("policies")) {
      for (const auto& pj : j["policies"]) cfg.policies.push_back(parse_policy(pj, cfg.instance.arms));
    }
    cfg.horizon = j.value("horizon", cfg.horizon);
    cfg.runs = j.value("runs", cfg.runs);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.output = j.value("output", cfg.output);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.max_logged_rounds = j.value("logged_rounds", cfg.max_logged_rounds);
    cfg.true_mean = j.value("true_mean", cfg.true_mean);
    if (j.contains("grid")) cfg.grid = j["grid"].get<std::vector<double>>();
    cfg.grid_horizon = j.value("grid_horizon", cfg.grid_horizon);
    cfg.grid_runs = j.value("grid_runs", cfg.grid_runs);
    if (j.contains("check")) {
      for (const auto& cj : j["check"]) {
        cfg.check_specs.push_back(parse_perturbation(cj, cfg.instance.arms));
      }
    }
    if (j.contains("bounds")) {
      const json& b = j["bounds"];
      if (b.contains("arms")) cfg.bounds_arms = b["arms"].get<std::vector<int>>();
      if (b.contains("horizons")) cfg.bounds_horizons = b["horizons"].get<std::vector<double>>();
      cfg.bounds_p = b.value("p", cfg.bounds_p);
      cfg.bounds_c = b.value("c", cfg.bounds_c);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed field: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

void finalize_config(ExperimentConfig& config) {
  const bool estimator_mode = config.mode == Mode::kEstimatorConvergence;
  if (config.horizon <= 0) config.horizon = estimator_mode ? 5000 : 100000;
  if (config.runs <= 0) config.runs = estimator_mode ? 60 : 40;
  if (config.grid_horizon <= 0) config.grid_horizon = config.horizon;
  if (config.grid_runs <= 0) config.grid_runs = config.runs;
  if (config.max_logged_rounds < 1) throw ConfigError("config: logged_rounds must be positive");
  if (config.instance.arms < 2) throw ConfigError("config: instance needs at least two arms");

  const bool needs_policies = config.mode == Mode::kBandit || config.mode == Mode::kGridSearch ||
                              estimator_mode;
  if (needs_policies && config.policies.empty()) {
    throw ConfigError("config: no policies configured");
  }
  if (config.mode == Mode::kBandit || config.mode == Mode::kGridSearch) {
    if (config.horizon < config.instance.arms) {
      throw ConfigError("config: horizon must cover one pull per arm");
    }
  }
  for (const auto& policy : config.policies) {
    if (!(policy.p > 1.0 && policy.p <= 2.0)) {
      throw ConfigError("config: policy moment order p must lie in (1,2]");
    }
    // moment-order compatibility with the noise model
    if (config.instance.noise.kind == NoiseSpec::Kind::kParetoShifted &&
        config.instance.noise.alpha <= policy.p) {
      throw ConfigError("config: noise alpha must exceed the policy's moment order p");
    }
  }
}

std::vector<double> default_search_grid() {
  // 62 points: [0.1, 5.0] split into 50 steps, [0.01, 0.1] into 10 steps
  // (right endpoints), plus two extra small values.
  std::vector<double> grid{0.001, 0.005};
  for (int i = 1; i <= 10; ++i) grid.push_back(0.01 + i * (0.1 - 0.01) / 10.0);
  for (int i = 1; i <= 50; ++i) grid.push_back(0.1 + i * (5.0 - 0.1) / 50.0);
  return grid;
}

std::vector<long> logged_rounds(long horizon, int max_points) {
  std::vector<long> rounds;
  if (horizon <= max_points) {
    rounds.reserve(horizon);
    for (long t = 1; t <= horizon; ++t) rounds.push_back(t);
    return rounds;
  }
  rounds.reserve(max_points);
  const double log_t = std::log(static_cast<double>(horizon));
  long prev = 0;
  for (int i = 0; i < max_points; ++i) {
    const double f = static_cast<double>(i) / (max_points - 1);
    auto t = static_cast<long>(std::llround(std::exp(f * log_t)));
    if (t <= prev) t = prev + 1;
    if (t > horizon) t = horizon;
    rounds.push_back(t);
    prev = t;
    if (t == horizon) break;
  }
  if (rounds.back() != horizon) rounds.push_back(horizon);
  return rounds;
}

namespace {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

void write_rows_csv(std::ostream& os, const std::vector<OutputRow>& rows) {
  os << "round,policy,metric,mean,std,runs\n";
  for (const auto& row : rows) {
    os << row.round << ',' << row.policy << ',' << row.metric << ',' << format_double(row.mean)
       << ',' << format_double(row.std_dev) << ',' << row.runs << '\n';
  }
}

void write_check_csv(std::ostream& os, const std::vector<CheckRow>& rows) {
  os << "family,shape,scale,f_zero,f_zero_ok,log_concave_ok,integral_C,integral_bound,"
        "integral_ok,sup_hazard,all_ok\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    os << perturb_kind_name(row.spec.kind) << ',' << format_double(row.spec.shape) << ','
       << format_double(row.spec.scale) << ',' << format_double(r.f_zero) << ',' << r.f_zero_ok
       << ',' << r.log_concave_ok << ',' << format_double(r.integral_C) << ','
       << (r.integral_bound ? format_double(*r.integral_bound) : std::string("nan")) << ','
       << r.integral_ok << ',' << format_double(r.sup_hazard) << ',' << r.all_ok() << '\n';
  }
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundsRow>& rows) {
  os << "family,arms,horizon,p,c,gap,gap_dependent,gap_independent,ape_lower,ucb_lower\n";
  for (const auto& row : rows) {
    os << row.family << ',' << row.arms << ',' << format_double(row.horizon) << ','
       << format_double(row.p) << ',' << format_double(row.c) << ',' << format_double(row.gap)
       << ',' << format_double(row.gap_dependent) << ',' << format_double(row.gap_independent)
       << ',' << format_double(row.ape_lower) << ',' << format_double(row.ucb_lower) << '\n';
  }
}

}  // namespace heavytail
