#include "mogt/sim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mogt/errors.hpp"
#include "mogt/sim/voting.hpp"
#include "episode_detail.hpp"

namespace mogt::sim {

namespace {

// Binomial thinning: each of c objects survives with probability 1 - drop.
std::vector<double> apply_drops(const std::vector<double>& lifted, double drop) {
  if (drop <= 0.0) return lifted;
  std::vector<double> out(lifted.size(), 0.0);
  for (std::size_t c = 0; c < lifted.size(); ++c) {
    if (lifted[c] == 0.0) continue;
    double binom = 1.0;  // C(c, j)
    for (std::size_t j = 0; j <= c; ++j) {
      out[j] += lifted[c] * binom * std::pow(1.0 - drop, static_cast<double>(j)) *
                std::pow(drop, static_cast<double>(c - j));
      binom = binom * static_cast<double>(c - j) / static_cast<double>(j + 1);
    }
  }
  return out;
}

}  // namespace

AttemptModel attempt_model(std::size_t action, const EnvironmentConfig& env) {
  env.validate();
  if (action >= env.actions.size()) throw ValidationError(fmt::format("no action with index {}", action));
  const ActionModel& model = env.actions[action];
  const auto p = model.action.distribution.probs();

  AttemptModel out;
  std::vector<double> lifted(p.size(), 0.0);
  if (env.routine == Routine::AlwaysLift) {
    out.trigger_probability.assign(p.size(), 1.0);
    lifted.assign(p.begin(), p.end());
  } else {
    double theta = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
      const int count = static_cast<int>(c);
      const double tau = voting_trigger_probability(env.sensor.fire_probability(Estimator::NonZero, count),
                                                    env.sensor.fire_probability(model.target_estimator, count),
                                                    static_cast<std::size_t>(env.timesteps_per_attempt), env.voting);
      out.trigger_probability.push_back(tau);
      theta += p[c] * tau;
    }
    // Draw r (0-based) ends the attempt by a vote with probability (1-theta)^r theta;
    // the last allowed draw is lifted regardless.
    const int R = env.max_regrasps;
    const double miss = 1.0 - theta;
    double geometric = 0.0;
    double expected = 0.0;
    double miss_pow = 1.0;
    for (int r = 0; r < R; ++r) {
      geometric += miss_pow;
      expected += r * miss_pow * theta;
      miss_pow *= miss;
    }
    // miss_pow is now (1-theta)^R: the last draw is lifted voted or not.
    expected += R * miss_pow;
    for (std::size_t c = 0; c < p.size(); ++c) {
      // A certain lift can round to just above 1.
      lifted[c] = std::min(1.0, p[c] * out.trigger_probability[c] * geometric + miss_pow * p[c]);
    }
    out.expected_regrasps = expected;
  }
  out.lifted = OutcomeDistribution(apply_drops(lifted, env.drop_on_lift_prob));
  return out;
}

std::vector<GraspAction> effective_actions(const EnvironmentConfig& env) {
  std::vector<GraspAction> out;
  for (std::size_t a = 0; a < env.actions.size(); ++a) {
    GraspAction g = env.actions[a].action;
    g.distribution = attempt_model(a, env).lifted;
    out.push_back(std::move(g));
  }
  return out;
}

ExactExpectation exact_episode_expectation(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env) {
  env.validate();
  detail::check_policy(policy, target_n, env);
  const auto n = static_cast<std::size_t>(target_n);

  std::vector<AttemptModel> models;
  for (std::size_t a = 0; a < env.actions.size(); ++a) models.push_back(attempt_model(a, env));

  // Per-state step law: advance[s][s'] for s' > s, the stay probability, the
  // deposit probability and the expected re-grasps of that state's attempt.
  std::vector<std::vector<double>> advance(n, std::vector<double>(n + 1, 0.0));
  std::vector<double> stay(n, 0.0);
  std::vector<double> deposit(n, 0.0);
  std::vector<double> regrasps(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    const AttemptModel& m = models[policy.action_for[s]];
    regrasps[s] = m.expected_regrasps;
    const auto lifted = m.lifted.probs();
    for (std::size_t q = 0; q < lifted.size(); ++q) {
      if (q > 0 && s + q <= n) {
        advance[s][s + q] += lifted[q];
        deposit[s] += lifted[q];
      } else {
        stay[s] += lifted[q];
      }
    }
  }

  ExactExpectation out;

  // Forward distribution over states, one lift at a time, up to the cap.
  std::vector<double> mass(n + 1, 0.0);
  mass[0] = 1.0;
  for (int t = 0; t < env.episode_cap && n > 0; ++t) {
    std::vector<double> next(n + 1, 0.0);
    next[n] = mass[n];
    for (std::size_t s = 0; s < n; ++s) {
      if (mass[s] == 0.0) continue;
      out.capped.lifts += mass[s];
      out.capped.transfers += mass[s] * deposit[s];
      out.capped.regrasps += mass[s] * regrasps[s];
      next[s] += mass[s] * stay[s];
      for (std::size_t u = s + 1; u <= n; ++u) next[u] += mass[s] * advance[s][u];
    }
    mass = std::move(next);
  }
  out.success_probability = mass[n];

  // The chain only moves forward, so reachability and the absorption
  // expectations come from one backward pass.
  std::vector<bool> reachable(n + 1, false);
  reachable[0] = true;
  for (std::size_t s = 0; s < n; ++s) {
    if (!reachable[s]) continue;
    for (std::size_t u = s + 1; u <= n; ++u) reachable[u] = reachable[u] || advance[s][u] > 0.0;
  }
  std::vector<bool> can_finish(n + 1, false);
  can_finish[n] = true;
  for (std::size_t s = n; s-- > 0;) {
    for (std::size_t u = s + 1; u <= n && !can_finish[s]; ++u) can_finish[s] = advance[s][u] > 0.0 && can_finish[u];
    if (reachable[s] && !can_finish[s]) out.stuck_states.push_back(static_cast<int>(s));
  }

  // E[s] = (c(s) + sum_u P(s, u) E[u]) / (1 - P(s, s)), finite only when
  // every successor is finite.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<ExpectedMetrics> expect(n + 1);
  std::vector<bool> finite(n + 1, true);
  for (std::size_t s = n; s-- > 0;) {
    finite[s] = stay[s] < 1.0;
    ExpectedMetrics e{deposit[s], 1.0, regrasps[s]};
    for (std::size_t u = s + 1; u <= n && finite[s]; ++u) {
      if (advance[s][u] == 0.0) continue;
      finite[s] = finite[u];
      e.transfers += advance[s][u] * expect[u].transfers;
      e.lifts += advance[s][u] * expect[u].lifts;
      e.regrasps += advance[s][u] * expect[u].regrasps;
    }
    const double leave = 1.0 - stay[s];
    expect[s] = finite[s] ? ExpectedMetrics{e.transfers / leave, e.lifts / leave, e.regrasps / leave}
                          : ExpectedMetrics{kInf, kInf, kInf};
  }
  std::reverse(out.stuck_states.begin(), out.stuck_states.end());
  if (finite[0]) out.uncapped = expect[0];
  return out;
}

}  // namespace mogt::sim
