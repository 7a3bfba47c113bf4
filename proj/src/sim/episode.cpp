#include "mogt/sim/episode.hpp"

#include <fmt/format.h>

#include "mogt/errors.hpp"
#include "episode_detail.hpp"

namespace mogt::sim {

int sample_grasp_outcome(const OutcomeDistribution& dist, Rng& rng) {
  const auto probs = dist.probs();
  double u = rng.uniform01();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (u < probs[i]) return static_cast<int>(i);
    u -= probs[i];
  }
  // u landed in the rounding slack past the last bucket.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

namespace {

int apply_drops(int count, double drop, Rng& rng) {
  if (drop <= 0.0) return count;
  int kept = 0;
  for (int i = 0; i < count; ++i) kept += rng.bernoulli(drop) ? 0 : 1;
  return kept;
}

bool vote(int count, Estimator target, const EnvironmentConfig& env, Rng& rng) {
  const double p_nz = env.sensor.fire_probability(Estimator::NonZero, count);
  const double p_tg = env.sensor.fire_probability(target, count);
  bool nz2 = false, tg2 = false, nz1 = false, tg1 = false;
  for (int t = 0; t < env.timesteps_per_attempt; ++t) {
    const bool nz = rng.bernoulli(p_nz);
    const bool tg = rng.bernoulli(p_tg);
    if (nz2 && nz1 && nz && (env.voting == VotingRule::TargetAtStreakEnd ? tg : (tg2 || tg1 || tg))) return true;
    nz2 = nz1;
    tg2 = tg1;
    nz1 = nz;
    tg1 = tg;
  }
  return false;
}

}  // namespace

namespace detail {

AttemptResult attempt(std::size_t action, const EnvironmentConfig& env, Rng& rng) {
  const ActionModel& model = env.actions[action];
  AttemptResult result;
  if (env.routine == Routine::AlwaysLift) {
    result.lifted_quantity = apply_drops(sample_grasp_outcome(model.action.distribution, rng), env.drop_on_lift_prob, rng);
    result.voted = true;
    return result;
  }
  while (true) {
    const int count = sample_grasp_outcome(model.action.distribution, rng);
    result.voted = vote(count, model.target_estimator, env, rng);
    if (result.voted || result.regrasps == env.max_regrasps) {
      result.lifted_quantity = apply_drops(count, env.drop_on_lift_prob, rng);
      return result;
    }
    ++result.regrasps;
  }
}

EpisodeResult play(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env, Rng& rng,
                   bool record_trace) {
  EpisodeResult r;
  while (r.final_count < target_n && r.lifts < env.episode_cap) {
    const std::size_t action = policy.action_for[static_cast<std::size_t>(r.final_count)];
    const AttemptResult a = attempt(action, env, rng);
    ++r.lifts;
    r.regrasps += a.regrasps;
    const bool deposit = a.lifted_quantity > 0 && r.final_count + a.lifted_quantity <= target_n;
    if (record_trace) r.action_trace.push_back({r.final_count, action, a.lifted_quantity, deposit});
    if (deposit) {
      ++r.transfers;
      r.final_count += a.lifted_quantity;
    }
  }
  r.capped = r.final_count < target_n;
  return r;
}

void check_policy(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env) {
  if (target_n < 0) throw ValidationError("target must be non-negative");
  if (policy.action_for.size() < static_cast<std::size_t>(target_n)) {
    throw ValidationError(fmt::format("policy covers {} states, target needs {}", policy.action_for.size(), target_n));
  }
  for (int s = 0; s < target_n; ++s) {
    if (policy.action_for[static_cast<std::size_t>(s)] >= env.actions.size()) {
      throw ValidationError(fmt::format("policy action for state {} does not exist", s));
    }
  }
}

}  // namespace detail

AttemptResult simulate_attempt(std::size_t action, const EnvironmentConfig& env, Rng& rng) {
  env.validate();
  if (action >= env.actions.size()) throw ValidationError(fmt::format("no action with index {}", action));
  return detail::attempt(action, env, rng);
}

EpisodeResult run_episode(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env, Rng& rng,
                          bool record_trace) {
  env.validate();
  detail::check_policy(policy, target_n, env);
  return detail::play(policy, target_n, env, rng, record_trace);
}

}  // namespace mogt::sim
