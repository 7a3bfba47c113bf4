#include "mogt/app/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "mogt/errors.hpp"
#include "mogt/grasp/trial_log.hpp"

namespace mogt::app {

namespace {

std::size_t line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) { throw ParseError(line_of(node), message); }

void expect_map(const YAML::Node& node, std::string_view what) {
  if (!node.IsMap()) fail(node, fmt::format("{} must be a mapping", what));
}

// Unknown keys are errors so that a misspelt field never silently falls back to a default.
void check_keys(const YAML::Node& node, std::string_view what, std::initializer_list<std::string_view> allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(kv.first, fmt::format("unknown key '{}' in {}", key, what));
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, std::string_view what) {
  if (!node.IsScalar()) fail(node, fmt::format("{} must be a scalar", what));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, fmt::format("{}: cannot read '{}'", what, node.Scalar()));
  }
}

template <typename Parse>
auto enum_value(const YAML::Node& node, std::string_view what, Parse parse) {
  const auto text = scalar<std::string>(node, what);
  try {
    return parse(text);
  } catch (const ValidationError& e) {
    fail(node, fmt::format("{}: {}", what, e.what()));
  }
}

OutcomeDistribution parse_distribution(const YAML::Node& node) {
  std::vector<double> probs;
  if (node.IsSequence()) {
    for (const auto& p : node) probs.push_back(scalar<double>(p, "distribution entry"));
  } else if (node.IsMap()) {
    // Sparse form: {count: probability}.
    for (const auto& kv : node) {
      const int count = scalar<int>(kv.first, "distribution count");
      if (count < 0 || count > 1000) fail(kv.first, fmt::format("distribution count {} out of range", count));
      if (probs.size() <= static_cast<std::size_t>(count)) probs.resize(static_cast<std::size_t>(count) + 1, 0.0);
      probs[static_cast<std::size_t>(count)] += scalar<double>(kv.second, "distribution entry");
    }
  } else {
    fail(node, "distribution must be a list of probabilities or a {count: probability} mapping");
  }
  try {
    return OutcomeDistribution(std::move(probs));
  } catch (const ValidationError& e) {
    fail(node, e.what());
  }
}

ActionSpec parse_action(const YAML::Node& node, const std::filesystem::path& base_dir) {
  expect_map(node, "action");
  check_keys(node, "action", {"id", "quantity", "estimator", "distribution", "trials"});
  ActionSpec spec;
  const auto q = node["quantity"];
  if (!q) fail(node, "action needs a quantity (a count or 'max')");
  if (scalar<std::string>(q, "quantity") == "max") {
    spec.quantity = std::nullopt;
  } else {
    const int quantity = scalar<int>(q, "quantity");
    if (quantity < 1) fail(q, fmt::format("quantity must be >= 1, got {}", quantity));
    spec.quantity = quantity;
  }
  spec.id = node["id"] ? scalar<std::string>(node["id"], "id") : grasp_action_id(spec.quantity);
  if (node["estimator"]) spec.estimator = enum_value(node["estimator"], "estimator", sim::parse_estimator);

  const bool inline_dist = static_cast<bool>(node["distribution"]);
  const bool from_trials = static_cast<bool>(node["trials"]);
  if (inline_dist == from_trials) fail(node, fmt::format("action '{}' needs exactly one of distribution, trials", spec.id));
  if (inline_dist) {
    spec.distribution = parse_distribution(node["distribution"]);
  } else {
    const auto t = node["trials"];
    expect_map(t, "trials");
    check_keys(t, "trials", {"file", "pregrasp", "smoothing", "m_max"});
    if (!t["file"] || !t["pregrasp"]) fail(t, "trials needs file and pregrasp");
    TrialSource source;
    source.file = scalar<std::string>(t["file"], "file");
    if (source.file.is_relative()) source.file = base_dir / source.file;
    source.pregrasp = scalar<std::string>(t["pregrasp"], "pregrasp");
    if (t["smoothing"]) source.smoothing = enum_value(t["smoothing"], "smoothing", grasp::parse_smoothing);
    if (t["m_max"]) {
      source.m_max = scalar<int>(t["m_max"], "m_max");
      if (source.m_max < 1) fail(t["m_max"], "m_max must be >= 1");
    }
    if (!std::filesystem::exists(source.file)) {
      fail(t["file"], fmt::format("trial log '{}' does not exist", source.file.string()));
    }
    spec.trials = std::move(source);
  }
  return spec;
}

void parse_sensor(const YAML::Node& node, sim::SensorModel& sensor) {
  if (node.IsScalar()) {
    sensor = enum_value(node, "sensor", sim::SensorModel::preset);
    return;
  }
  expect_map(node, "sensor");
  check_keys(node, "sensor", {"preset", "precision", "rates"});
  if (node["preset"]) sensor = enum_value(node["preset"], "sensor preset", sim::SensorModel::preset);
  if (const auto p = node["precision"]) {
    expect_map(p, "precision");
    for (const auto& kv : p) {
      const auto e = enum_value(kv.first, "estimator", sim::parse_estimator);
      const double precision = scalar<double>(kv.second, "precision");
      sensor[e] = {precision, 1.0 - precision};
    }
  }
  if (const auto r = node["rates"]) {
    expect_map(r, "rates");
    for (const auto& kv : r) {
      const auto e = enum_value(kv.first, "estimator", sim::parse_estimator);
      expect_map(kv.second, "rates entry");
      check_keys(kv.second, "rates entry", {"tpr", "fpr"});
      if (kv.second["tpr"]) sensor[e].true_positive_rate = scalar<double>(kv.second["tpr"], "tpr");
      if (kv.second["fpr"]) sensor[e].false_positive_rate = scalar<double>(kv.second["fpr"], "fpr");
    }
  }
}

ExperimentConfig parse_root(const YAML::Node& root, const std::filesystem::path& base_dir) {
  expect_map(root, "config");
  check_keys(root, "config",
             {"schema_version", "target", "seed", "episodes", "solver", "reward", "sensor", "routine", "voting",
              "attempt", "episode_cap", "capacity", "actions"});
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;

  if (const auto v = root["schema_version"]) {
    const int version = scalar<int>(v, "schema_version");
    if (version != kConfigSchemaVersion) fail(v, fmt::format("unsupported schema_version {}", version));
  }
  if (!root["target"]) fail(root, "missing required key 'target'");
  cfg.target_n = scalar<int>(root["target"], "target");
  if (const auto s = root["seed"]) cfg.seed = scalar<std::uint64_t>(s, "seed");
  if (const auto e = root["episodes"]) {
    const auto episodes = scalar<long long>(e, "episodes");
    if (episodes < 1) fail(e, "episodes must be >= 1");
    cfg.episodes = static_cast<std::size_t>(episodes);
  }

  if (const auto s = root["solver"]) {
    expect_map(s, "solver");
    check_keys(s, "solver", {"discount", "epsilon", "max_iterations", "overshoot"});
    if (s["discount"]) cfg.solver.discount = scalar<double>(s["discount"], "discount");
    if (s["epsilon"]) cfg.solver.epsilon = scalar<double>(s["epsilon"], "epsilon");
    if (s["max_iterations"]) {
      const auto it = scalar<long long>(s["max_iterations"], "max_iterations");
      if (it < 1) fail(s["max_iterations"], "max_iterations must be >= 1");
      cfg.solver.max_iterations = static_cast<std::size_t>(it);
    }
    if (s["overshoot"]) cfg.overshoot = enum_value(s["overshoot"], "overshoot", mdp::parse_overshoot_mode);
  }
  cfg.reward.target_n = cfg.target_n;
  if (const auto r = root["reward"]) {
    expect_map(r, "reward");
    check_keys(r, "reward", {"goal", "overshoot", "shortfall_weight"});
    if (r["goal"]) cfg.reward.goal_reward = scalar<double>(r["goal"], "goal");
    if (r["overshoot"]) cfg.reward.overshoot_penalty = scalar<double>(r["overshoot"], "overshoot");
    if (r["shortfall_weight"]) cfg.reward.shortfall_weight = scalar<double>(r["shortfall_weight"], "shortfall_weight");
  }

  auto& env = cfg.environment;
  if (const auto s = root["sensor"]) parse_sensor(s, env.sensor);
  if (const auto r = root["routine"]) env.routine = enum_value(r, "routine", sim::parse_routine);
  if (const auto v = root["voting"]) env.voting = enum_value(v, "voting", sim::parse_voting_rule);
  if (const auto a = root["attempt"]) {
    expect_map(a, "attempt");
    check_keys(a, "attempt", {"max_regrasps", "timesteps", "drop_on_lift"});
    if (a["max_regrasps"]) env.max_regrasps = scalar<int>(a["max_regrasps"], "max_regrasps");
    if (a["timesteps"]) env.timesteps_per_attempt = scalar<int>(a["timesteps"], "timesteps");
    if (a["drop_on_lift"]) env.drop_on_lift_prob = scalar<double>(a["drop_on_lift"], "drop_on_lift");
  }
  if (const auto c = root["episode_cap"]) env.episode_cap = scalar<int>(c, "episode_cap");
  if (const auto c = root["capacity"]) {
    cfg.capacity = scalar<int>(c, "capacity");
    if (*cfg.capacity < 1) fail(c, "capacity must be >= 1");
  }

  const auto actions = root["actions"];
  if (!actions || !actions.IsSequence() || actions.size() == 0) fail(root, "actions must be a non-empty list");
  std::set<std::string> ids;
  for (const auto& a : actions) {
    auto spec = parse_action(a, base_dir);
    if (!ids.insert(spec.id).second) fail(a, fmt::format("duplicate action id '{}'", spec.id));
    cfg.actions.push_back(std::move(spec));
  }

  cfg.reward.validate();
  if (!(cfg.solver.discount > 0.0 && cfg.solver.discount <= 1.0)) {
    throw ValidationError(fmt::format("discount must be in (0, 1], got {}", cfg.solver.discount));
  }
  if (!(cfg.solver.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (cfg.target_n < 1) throw ValidationError(fmt::format("target must be >= 1, got {}", cfg.target_n));
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0, e.msg);
  }
  ExperimentConfig cfg = parse_root(root, base_dir);
  // Resolving the environment checks the distributions and attempt bounds.
  build_environment(cfg).validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

sim::EnvironmentConfig build_environment(const ExperimentConfig& config) {
  sim::EnvironmentConfig env = config.environment;
  env.actions.clear();
  for (const auto& spec : config.actions) {
    OutcomeDistribution dist;
    if (spec.distribution) {
      dist = *spec.distribution;
    } else {
      const auto& source = *spec.trials;
      const auto set = grasp::load_trial_log(source.file, source.m_max);
      const auto trials = set.trials_for(source.pregrasp);
      if (trials.empty()) {
        throw ValidationError(
            fmt::format("trial log '{}' has no trials for pre-grasp '{}'", source.file.string(), source.pregrasp));
      }
      dist = grasp::estimate_distribution(trials, source.m_max, source.smoothing);
    }
    env.actions.push_back(sim::make_action_model(GraspAction{spec.id, spec.quantity, std::move(dist)}, spec.estimator));
  }
  return env;
}

}  // namespace mogt::app
