#include "mogt/app/commands.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mogt/errors.hpp"
#include "mogt/grasp/hand_model.hpp"
#include "mogt/grasp/selection.hpp"
#include "mogt/grasp/trial_log.hpp"
#include "mogt/mdp/transfer_mdp.hpp"
#include "mogt/mdp/value_iteration.hpp"
#include "mogt/sim/episode.hpp"
#include "mogt/sim/monte_carlo.hpp"
#include "mogt/sim/oracle.hpp"
#include "mogt/sim/policies.hpp"

namespace mogt::app {

namespace {

std::string angle(double deg) { return fmt::format("{:.3f}", deg); }

std::string angles(const grasp::JointVector& j) { return fmt::format("{:.3f},{:.3f},{:.3f}", j[0], j[1], j[2]); }

std::string distribution_text(const OutcomeDistribution& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) out += (i == 0 ? "" : ",") + format_real(d[i]);
  return out;
}

std::vector<std::string> count_columns(int m_max) {
  std::vector<std::string> cols;
  for (int i = 0; i <= m_max; ++i) cols.push_back(fmt::format("p{}", i));
  return cols;
}

void append_counts(std::vector<std::string>& row, const OutcomeDistribution& d, int m_max) {
  for (int i = 0; i <= m_max; ++i) row.push_back(format_real(d[static_cast<std::size_t>(i)]));
}

template <typename T>
const T& require(const std::optional<T>& value, std::string_view flag, std::string_view kind) {
  if (!value) throw ValidationError(fmt::format("pregrasp {} needs {}", kind, flag));
  return *value;
}

// ---- pregrasp ----

void add_cluster_sections(Report& report, const grasp::ElbowScan& scan) {
  auto& s = report.section("clusters", {"k", "inertia", "distortion", "chosen"});
  for (const auto& [k, inertia] : scan.inertia_by_k) {
    s.add({std::to_string(k), format_real(inertia), format_real(scan.distortion_by_k.at(k)),
           k == scan.chosen_k ? "yes" : "no"});
  }
}

Report pregrasp_selection_report(const std::string& kind, const grasp::PreGraspSelection& sel, int m_max) {
  Report report("pregrasp " + kind);
  report.set("criterion", sel.criterion.kind == grasp::Criterion::Kind::Agp
                              ? std::string("agp")
                              : fmt::format("p{}", sel.criterion.quantity));
  report.set("pregrasp", sel.pregrasp.id);
  report.set("joints_deg", angles(sel.pregrasp.joints()));
  report.set("distribution", distribution_text(sel.distribution));
  report.set("agp", format_real(sel.agp));
  report.set("score", format_real(sel.score));
  report.set("spread_deg", angle(sel.spread.spread_deg));
  report.set("candidates", std::to_string(sel.candidates));
  report.set("survivors", std::to_string(sel.survivors));
  report.set("threshold", format_real(sel.threshold));
  report.set("chosen_k", std::to_string(sel.clusters.chosen_k));

  auto& spreads = report.section("spreads", {"spread_deg", "mean_score", "pregrasps"});
  for (const auto& s : sel.spread.scores) {
    spreads.add({angle(s.spread_deg), format_real(s.mean_score), std::to_string(s.pregrasps)});
  }
  add_cluster_sections(report, sel.clusters);
  auto cols = std::vector<std::string>{"centroid", "joints_deg", "members", "nearest", "score", "chosen"};
  auto& cents = report.section("centroids", cols);
  for (std::size_t c = 0; c < sel.centroids.size(); ++c) {
    const auto& e = sel.centroids[c];
    cents.add({std::to_string(c), angles(e.centroid), std::to_string(e.members), e.nearest_pregrasp,
               format_real(e.score), c == sel.chosen_centroid ? "yes" : "no"});
  }
  (void)m_max;
  return report;
}

grasp::SelectionOptions selection_options(const PregraspRequest& r, const grasp::TrialSet* evaluation) {
  grasp::SelectionOptions options;
  options.filter.keep_fraction = r.keep_fraction;
  options.filter.min_score = r.min_score;
  options.k_max = r.k_max;
  options.seed = require(r.seed, "--seed", r.kind);
  options.evaluation = evaluation;
  return options;
}

// ---- solve / simulate ----

struct Solved {
  mdp::TransferMdp mdp;
  mdp::SolveResult result;
};

Solved solve_config(const ExperimentConfig& config, const sim::EnvironmentConfig& env) {
  auto mdp = mdp::TransferMdp::build(sim::effective_actions(env), config.reward, config.overshoot);
  auto result = mdp::value_iteration(mdp, config.solver);
  return {std::move(mdp), std::move(result)};
}

mdp::Policy converged_policy(const ExperimentConfig& config, const sim::EnvironmentConfig& env) {
  auto solved = solve_config(config, env);
  if (!solved.result.converged) {
    throw NonConvergenceError(fmt::format("value iteration did not converge in {} iterations (residual {})",
                                          solved.result.iterations, format_real(solved.result.residual)),
                              solved.result.residual);
  }
  return solved.result.policy;
}

int naive_capacity(const ExperimentConfig& config, const sim::EnvironmentConfig& env) {
  return config.capacity ? *config.capacity : sim::max_capacity(env);
}

struct PolicyChoice {
  sim::EnvironmentConfig env;
  mdp::Policy policy;
};

PolicyChoice resolve_policy(const ExperimentConfig& config, const sim::EnvironmentConfig& env, const std::string& name) {
  if (name == "single") {
    auto single = sim::single_object_environment(env);
    return {single, sim::constant_policy(config.target_n, 0)};
  }
  if (name == "naive") return {env, sim::naive_policy_table(config.target_n, env, naive_capacity(config, env))};
  if (name == "mdp") return {env, converged_policy(config, env)};
  return {env, load_policy_file(name, config.target_n, env)};
}

std::vector<std::size_t> capped_episode_indices(const mdp::Policy& policy, int target_n,
                                                const sim::EnvironmentConfig& env, std::size_t episodes,
                                                std::uint64_t seed) {
  std::vector<std::size_t> capped;
  for (std::size_t i = 0; i < episodes; ++i) {
    Rng rng = Rng::for_stream(seed, i);
    if (sim::run_episode(policy, target_n, env, rng).capped) capped.push_back(i);
  }
  return capped;
}

void add_policy_section(Report& report, const mdp::Policy& policy, const sim::EnvironmentConfig& env) {
  auto& s = report.section("policy", {"state", "action"});
  for (std::size_t state = 0; state < policy.action_for.size(); ++state) {
    s.add({std::to_string(state), env.actions[policy.action_for[state]].action.id});
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

double reduction_pct(int target_n, double mean) {
  return 100.0 * (static_cast<double>(target_n) - mean) / static_cast<double>(target_n);
}

}  // namespace

// ---- public commands ----

CommandResult run_pregrasp(const PregraspRequest& r) {
  const auto& kind = r.kind;
  if (kind == "mcpg") {
    std::vector<grasp::PreGrasp> pregrasps;
    std::optional<grasp::TrialSet> set;
    if (r.trials) {
      set = grasp::load_trial_log(*r.trials, r.m_max);
      pregrasps = set->pregrasps;
    } else {
      pregrasps = grasp::generate_pregrasp_grid(r.spread_step, r.finger_step);
    }
    const auto sel = grasp::select_mcpg(pregrasps);
    Report report("pregrasp mcpg");
    report.set("pregrasp", sel.pregrasp.id);
    report.set("joints_deg", angles(sel.pregrasp.joints()));
    report.set("volume_mm3", format_real(sel.volume));
    report.set("pregrasps", std::to_string(pregrasps.size()));
    if (set) {
      const auto trials = set->trials_for(sel.pregrasp.id);
      if (!trials.empty()) {
        const auto ppg = grasp::compute_ppg(trials, set->m_max);
        report.set("distribution", distribution_text(ppg));
        report.set("agp", format_real(grasp::compute_agp(ppg)));
      }
    }
    std::vector<std::size_t> order(pregrasps.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sel.volumes[a] > sel.volumes[b]; });
    auto& ranking = report.section("ranking", {"rank", "pregrasp", "joints_deg", "volume_mm3"});
    for (std::size_t i = 0; i < std::min<std::size_t>(10, order.size()); ++i) {
      const auto& p = pregrasps[order[i]];
      ranking.add({std::to_string(i + 1), p.id, angles(p.joints()), format_real(sel.volumes[order[i]])});
    }
    return {std::move(report), kExitOk};
  }

  if (kind != "ppg" && kind != "cppg" && kind != "bepg" && kind != "endgrasp") {
    throw ValidationError(fmt::format("unknown pregrasp command '{}'", kind));
  }
  const auto set = grasp::load_trial_log(require(r.trials, "--trials", kind), r.m_max);

  if (kind == "ppg") {
    Report report("pregrasp ppg");
    report.set("pregrasps", std::to_string(set.pregrasps.size()));
    report.set("trials", std::to_string(set.trials.size()));
    auto cols = std::vector<std::string>{"pregrasp", "joints_deg", "trials"};
    for (auto& c : count_columns(set.m_max)) cols.push_back(c);
    cols.push_back("agp");
    auto& s = report.section("ppg", cols);
    for (const auto& st : grasp::pregrasp_statistics(set)) {
      std::vector<std::string> row{st.pregrasp->id, angles(st.pregrasp->joints()), std::to_string(st.trials)};
      append_counts(row, st.ppg, set.m_max);
      row.push_back(format_real(grasp::compute_agp(st.ppg)));
      s.add(std::move(row));
    }
    return {std::move(report), kExitOk};
  }

  if (kind == "endgrasp") {
    const auto& id = require(r.pregrasp, "--pregrasp", kind);
    const int q = require(r.target_q, "--target-q", kind);
    const auto sel = grasp::select_end_grasp(set, id, q, require(r.seed, "--seed", kind), r.k_max, r.steps);
    Report report("pregrasp endgrasp");
    report.set("pregrasp", sel.pregrasp.id);
    report.set("target_q", std::to_string(sel.target_q));
    report.set("successful_trials", std::to_string(sel.successful_trials));
    report.set("chosen_k", std::to_string(sel.clusters.chosen_k));
    report.set("chosen_cluster", std::to_string(sel.chosen_cluster));
    report.set("end_grasp_deg", angles(sel.synergy.end_grasp));
    add_cluster_sections(report, sel.clusters);
    auto cols = std::vector<std::string>{"cluster", "centroid_deg", "members"};
    for (auto& c : count_columns(set.m_max)) cols.push_back(c);
    auto& srg = report.section("srg", cols);
    for (std::size_t c = 0; c < sel.srg.size(); ++c) {
      std::vector<std::string> row{std::to_string(c), angles(sel.clusters.chosen.centroids[c]),
                                   std::to_string(sel.clusters.chosen.sizes[c])};
      append_counts(row, sel.srg[c], set.m_max);
      srg.add(std::move(row));
    }
    auto& syn = report.section("synergy", {"step", "joints_deg"});
    for (std::size_t i = 0; i < sel.synergy.trajectory.size(); ++i) {
      syn.add({std::to_string(i), angles(sel.synergy.trajectory[i])});
    }
    return {std::move(report), kExitOk};
  }

  std::optional<grasp::TrialSet> evaluation;
  if (r.evaluation) evaluation = grasp::load_trial_log(*r.evaluation, r.m_max);
  const auto options = selection_options(r, evaluation ? &*evaluation : nullptr);
  const auto sel = kind == "cppg" ? grasp::select_cppg(set, require(r.target_q, "--target-q", kind), options)
                                  : grasp::select_bepg(set, options);
  return {pregrasp_selection_report(kind, sel, set.m_max), kExitOk};
}

CommandResult run_solve(const ExperimentConfig& config, const std::optional<std::filesystem::path>& policy_out) {
  const auto env = build_environment(config);
  const auto solved = solve_config(config, env);
  const auto& res = solved.result;

  Report report("solve");
  report.set("target", std::to_string(config.target_n));
  report.set("routine", std::string(sim::to_string(env.routine)));
  report.set("discount", format_real(config.solver.discount));
  report.set("epsilon", fmt::format("{:g}", config.solver.epsilon));
  report.set("overshoot", std::string(mdp::to_string(config.overshoot)));
  report.set("iterations", std::to_string(res.iterations));
  report.set("residual", fmt::format("{:.3e}", res.residual));
  report.set("converged", res.converged ? "yes" : "no");
  auto& s = report.section("policy", {"state", "value", "action"});
  for (std::size_t state = 0; state < solved.mdp.num_decision_states(); ++state) {
    s.add({std::to_string(state), format_real(res.value.values[state]),
           solved.mdp.actions()[res.policy.action_for[state]].id});
  }
  s.add({std::to_string(solved.mdp.goal_state()), format_real(0.0), "-"});

  if (policy_out) {
    std::string text = "# state action\n";
    for (std::size_t state = 0; state < res.policy.action_for.size(); ++state) {
      text += fmt::format("{} {}\n", state, solved.mdp.actions()[res.policy.action_for[state]].id);
    }
    write_text_file(*policy_out, text);
  }
  return {std::move(report), res.converged ? kExitOk : kExitNonConvergence};
}

CommandResult run_simulate(const ExperimentConfig& config, const std::string& policy_name, std::uint64_t seed) {
  const auto base = build_environment(config);
  const auto choice = resolve_policy(config, base, policy_name);
  const int n = config.target_n;
  const auto agg = sim::monte_carlo(choice.policy, n, choice.env, config.episodes, seed);
  const auto exact = sim::exact_episode_expectation(choice.policy, n, choice.env);

  Report report("simulate");
  report.set("target", std::to_string(n));
  report.set("policy", policy_name);
  report.set("routine", std::string(sim::to_string(choice.env.routine)));
  report.set("episodes", std::to_string(agg.episodes));
  report.set("seed", std::to_string(seed));
  report.set("success_rate", format_real(agg.success_rate));
  report.set("oracle_success_probability", format_real(exact.success_probability));
  report.set("capped_episodes", std::to_string(agg.capped_episodes));

  auto& m = report.section("metrics", {"metric", "mean", "std_error", "oracle", "delta", "delta_in_se"});
  auto row = [&](std::string name, const sim::MetricSummary& mc, double oracle) {
    const double delta = mc.mean - oracle;
    m.add({std::move(name), format_real(mc.mean), format_real(mc.std_error), format_real(oracle), format_real(delta),
           mc.std_error > 0.0 ? format_real(delta / mc.std_error) : "-"});
  };
  row("transfers", agg.transfers, exact.capped.transfers);
  row("lifts", agg.lifts, exact.capped.lifts);
  row("regrasps", agg.regrasps, exact.capped.regrasps);
  add_policy_section(report, choice.policy, choice.env);

  if (agg.capped_episodes > 0) {
    auto& c = report.section("capped", {"episode"});
    for (auto i : capped_episode_indices(choice.policy, n, choice.env, config.episodes, seed)) {
      c.add({std::to_string(i)});
    }
    return {std::move(report), kExitEpisodeCap};
  }
  return {std::move(report), kExitOk};
}

CommandResult run_compare(const ExperimentConfig& config, std::uint64_t seed) {
  const auto base = build_environment(config);
  const int n = config.target_n;
  Report report("compare");
  report.set("target", std::to_string(n));
  report.set("episodes", std::to_string(config.episodes));
  report.set("seed", std::to_string(seed));
  auto& s = report.section("comparison", {"approach", "routine", "mean_transfers", "se_transfers", "mean_lifts",
                                          "se_lifts", "success_rate", "oracle_transfers", "oracle_lifts",
                                          "transfer_reduction_pct", "lift_reduction_pct"});
  bool capped = false;
  for (const auto routine : {sim::Routine::AlwaysLift, sim::Routine::VotingGated}) {
    auto env = base;
    env.routine = routine;
    for (const std::string approach : {"single", "naive", "mdp"}) {
      const auto choice = resolve_policy(config, env, approach);
      const auto agg = sim::monte_carlo(choice.policy, n, choice.env, config.episodes, seed);
      const auto exact = sim::exact_episode_expectation(choice.policy, n, choice.env);
      capped = capped || agg.capped_episodes > 0;
      s.add({approach, std::string(sim::to_string(routine)), format_real(agg.transfers.mean),
             format_real(agg.transfers.std_error), format_real(agg.lifts.mean), format_real(agg.lifts.std_error),
             format_real(agg.success_rate), format_real(exact.capped.transfers), format_real(exact.capped.lifts),
             format_real(reduction_pct(n, agg.transfers.mean)), format_real(reduction_pct(n, agg.lifts.mean))});
    }
  }
  return {std::move(report), capped ? kExitEpisodeCap : kExitOk};
}

mdp::Policy load_policy_file(const std::filesystem::path& path, int target_n, const sim::EnvironmentConfig& env) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open policy file '{}'", path.string()));
  const auto states = static_cast<std::size_t>(std::max(target_n, 0));
  std::vector<std::optional<std::size_t>> actions(states);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long state = -1;
    std::string id, extra;
    if (!(fields >> state >> id) || (fields >> extra)) throw ParseError(line_no, "expected '<state> <action_id>'");
    if (state < 0 || static_cast<std::size_t>(state) >= states) {
      throw ParseError(line_no, fmt::format("state {} outside [0, {})", state, states));
    }
    const auto a = env.find(id);
    if (!a) throw ParseError(line_no, fmt::format("unknown action '{}'", id));
    if (actions[static_cast<std::size_t>(state)]) throw ParseError(line_no, fmt::format("state {} listed twice", state));
    actions[static_cast<std::size_t>(state)] = *a;
  }
  mdp::Policy policy;
  for (std::size_t s = 0; s < states; ++s) {
    if (!actions[s]) throw ValidationError(fmt::format("policy file '{}' has no action for state {}", path.string(), s));
    policy.action_for.push_back(*actions[s]);
  }
  return policy;
}

// ---- command line ----

namespace {

std::uint64_t require_seed(const std::optional<std::uint64_t>& flag, const ExperimentConfig& config) {
  if (flag) return *flag;
  if (config.seed) return *config.seed;
  throw ValidationError("a seed is required: set 'seed' in the config or pass --seed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-object grasp-and-transfer experiments", "mogt"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
  std::string format_name = "table";
  app.add_option("--seed", seed, "Seed for stochastic commands (overrides the config)");
  app.add_option("--out", out_path, "Also write the report to this file");
  app.add_option("--format", format_name, "Report format")->check(CLI::IsMember({"table", "rows"}));

  PregraspRequest pre;
  std::optional<std::string> trials, evaluation;
  auto* pregrasp = app.add_subcommand("pregrasp", "Select pre-grasps and end-grasps from trial logs");
  pregrasp->add_option("kind", pre.kind, "ppg, cppg, bepg, mcpg or endgrasp")
      ->required()
      ->check(CLI::IsMember({"ppg", "cppg", "bepg", "mcpg", "endgrasp"}));
  pregrasp->add_option("--trials", trials, "Trial log");
  pregrasp->add_option("--evaluation", evaluation, "Trial log used to score centroids");
  pregrasp->add_option("--target-q", pre.target_q, "Target quantity (cppg, endgrasp)");
  pregrasp->add_option("--pregrasp", pre.pregrasp, "Pre-grasp id (endgrasp)");
  pregrasp->add_option("--m-max", pre.m_max, "Largest object count in the log")->check(CLI::PositiveNumber);
  pregrasp->add_option("--keep-fraction", pre.keep_fraction, "Share of the best pre-grasps kept for clustering");
  pregrasp->add_option("--min-score", pre.min_score, "Drop survivors scoring below this");
  pregrasp->add_option("--k-max", pre.k_max, "Largest cluster count tried")->check(CLI::PositiveNumber);
  pregrasp->add_option("--steps", pre.steps, "Synergy trajectory steps")->check(CLI::PositiveNumber);
  pregrasp->add_option("--spread-step", pre.spread_step, "Grid spread step when mcpg has no trial log");
  pregrasp->add_option("--finger-step", pre.finger_step, "Grid finger step when mcpg has no trial log");

  std::string config_path;
  std::optional<std::string> policy_out;
  auto* solve = app.add_subcommand("solve", "Solve the transfer MDP of a config");
  solve->add_option("config", config_path, "Experiment config")->required();
  solve->add_option("--policy-out", policy_out, "Write the policy as 'state action' lines");

  std::string policy_name = "mdp";
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation of one policy");
  simulate->add_option("config", config_path, "Experiment config")->required();
  simulate->add_option("--policy", policy_name, "single, naive, mdp or a policy file");

  auto* compare = app.add_subcommand("compare", "Single, naive and MDP policies under both routines");
  compare->add_option("config", config_path, "Experiment config")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CommandResult result{Report(""), kExitOk};
    if (pregrasp->parsed()) {
      pre.seed = seed;
      if (trials) pre.trials = *trials;
      if (evaluation) pre.evaluation = *evaluation;
      result = run_pregrasp(pre);
    } else {
      const auto config = load_config(config_path);
      if (solve->parsed()) {
        result = run_solve(config, policy_out ? std::optional<std::filesystem::path>(*policy_out) : std::nullopt);
      } else if (simulate->parsed()) {
        result = run_simulate(config, policy_name, require_seed(seed, config));
      } else {
        result = run_compare(config, require_seed(seed, config));
      }
    }
    const auto text = result.report.render(parse_format(format_name));
    out << text;
    if (out_path) write_text_file(*out_path, text);
    if (result.exit_code == kExitNonConvergence) {
      err << "error: value iteration did not converge (residual " << result.report.get("residual") << ")\n";
    } else if (result.exit_code == kExitEpisodeCap) {
      err << "error: some episodes hit the lift cap before reaching the target\n";
    }
    return result.exit_code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace mogt::app
