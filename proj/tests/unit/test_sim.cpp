#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mogt/errors.hpp"
#include "mogt/mdp/policy_evaluation.hpp"
#include "mogt/mdp/transfer_mdp.hpp"
#include "mogt/mdp/value_iteration.hpp"
#include "mogt/sim/episode.hpp"
#include "mogt/sim/monte_carlo.hpp"
#include "mogt/sim/oracle.hpp"
#include "mogt/sim/policies.hpp"
#include "mogt/sim/voting.hpp"
#include "support/oracles.hpp"

namespace mogt::sim {
namespace {

GraspAction action(std::optional<int> target, std::vector<double> probs) {
  return {grasp_action_id(target), target, OutcomeDistribution(std::move(probs))};
}

EnvironmentConfig env_with(std::vector<GraspAction> actions, SensorModel sensor = SensorModel::perfect()) {
  EnvironmentConfig env;
  for (auto& a : actions) env.actions.push_back(make_action_model(std::move(a)));
  env.sensor = sensor;
  return env;
}

std::vector<bool> bits(std::initializer_list<int> values) {
  std::vector<bool> out;
  for (int v : values) out.push_back(v != 0);
  return out;
}

std::optional<std::size_t> decide(const std::vector<bool>& nz, const std::vector<bool>& tg,
                                  VotingRule rule = VotingRule::TargetAtStreakEnd) {
  // std::vector<bool> has no contiguous storage; copy into plain arrays.
  std::unique_ptr<bool[]> a(new bool[nz.size() + 1]);
  std::unique_ptr<bool[]> b(new bool[tg.size() + 1]);
  std::copy(nz.begin(), nz.end(), a.get());
  std::copy(tg.begin(), tg.end(), b.get());
  return voting_decide({a.get(), nz.size()}, {b.get(), tg.size()}, rule);
}

// ---------------------------------------------------------------- sensor

TEST(Sensor, PresetsMapPrecisionToRates) {
  const auto s = SensorModel::simulation_preset();
  EXPECT_EQ(s[Estimator::NonZero].true_positive_rate, 0.951);
  EXPECT_NEAR(s[Estimator::NonZero].false_positive_rate, 0.049, 1e-15);
  EXPECT_EQ(SensorModel::real_preset()[Estimator::Geq2].true_positive_rate, 0.8304);
  EXPECT_EQ(SensorModel::preset("perfect"), SensorModel::perfect());
  EXPECT_THROW(SensorModel::preset("noisy"), ValidationError);
  SensorModel bad = SensorModel::perfect();
  bad[Estimator::Two].false_positive_rate = 1.5;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Sensor, Predicates) {
  EXPECT_TRUE(estimator_matches(Estimator::NonZero, 3));
  EXPECT_FALSE(estimator_matches(Estimator::NonZero, 0));
  EXPECT_TRUE(estimator_matches(Estimator::Geq2, 2));
  EXPECT_FALSE(estimator_matches(Estimator::Geq2, 1));
  EXPECT_TRUE(estimator_matches(Estimator::Three, 3));
  EXPECT_EQ(default_target_estimator(2), Estimator::Two);
  EXPECT_EQ(default_target_estimator(std::nullopt), Estimator::Geq2);
  EXPECT_EQ(default_target_estimator(4), Estimator::Geq2);
  EXPECT_EQ(parse_estimator("geq2"), Estimator::Geq2);
  EXPECT_THROW(parse_estimator("four"), ValidationError);
}

// ---------------------------------------------------------------- voting

TEST(Voting, Examples) {
  EXPECT_EQ(decide(bits({1, 1, 1}), bits({0, 0, 1})), 3u);
  EXPECT_EQ(decide(bits({1, 0, 1, 1, 1}), bits({1, 1, 1, 1, 0})), std::nullopt);
  EXPECT_EQ(decide(bits({0, 0, 0, 0}), bits({1, 1, 1, 1})), std::nullopt);
  EXPECT_EQ(decide(bits({1, 1}), bits({1, 1})), std::nullopt);
  EXPECT_EQ(decide(bits({1, 0, 1, 1, 1}), bits({1, 1, 1, 1, 0}), VotingRule::TargetInStreak), 5u);
  EXPECT_THROW(decide(bits({1, 1, 1}), bits({1, 1})), ValidationError);
}

TEST(Voting, MatchesDefinitionOnEveryShortStreamPair) {
  for (std::size_t len = 0; len <= 8; ++len) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * len)); ++code) {
      std::vector<bool> nz(len);
      std::vector<bool> tg(len);
      for (std::size_t i = 0; i < len; ++i) {
        nz[i] = (code >> i) & 1u;
        tg[i] = (code >> (len + i)) & 1u;
      }
      ASSERT_EQ(decide(nz, tg), testing::brute_force_vote(nz, tg, false)) << "len " << len << " code " << code;
      ASSERT_EQ(decide(nz, tg, VotingRule::TargetInStreak), testing::brute_force_vote(nz, tg, true));
    }
  }
}

TEST(Voting, TriggerProbabilityMatchesEnumeration) {
  for (std::size_t steps : {0u, 2u, 3u, 5u, 7u}) {
    for (double a : {0.0, 0.3, 0.951, 1.0}) {
      for (double b : {0.0, 0.2, 0.59, 1.0}) {
        for (bool anywhere : {false, true}) {
          const auto rule = anywhere ? VotingRule::TargetInStreak : VotingRule::TargetAtStreakEnd;
          EXPECT_NEAR(voting_trigger_probability(a, b, steps, rule),
                      testing::enumerated_trigger_probability(a, b, steps, anywhere), 1e-12)
              << steps << " " << a << " " << b << " " << anywhere;
        }
      }
    }
  }
}

// ---------------------------------------------------------------- sampling and attempts

TEST(Sampling, PointMassAndMean) {
  Rng rng(1);
  const auto two = OutcomeDistribution::point_mass(2);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_grasp_outcome(two, rng), 2);
  const OutcomeDistribution coin({0.5, 0.5});
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += sample_grasp_outcome(coin, rng);
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Sampling, SeedDeterminism) {
  const OutcomeDistribution d({.1, .2, .3, .4});
  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_grasp_outcome(d, a), sample_grasp_outcome(d, b));
}

TEST(Attempt, PerfectSensorsLiftAtOnce) {
  const auto env = env_with({action(2, {0, 0, 1})});
  Rng rng(3);
  const auto r = simulate_attempt(0, env, rng);
  EXPECT_EQ(r.lifted_quantity, 2);
  EXPECT_EQ(r.regrasps, 0);
  EXPECT_TRUE(r.voted);
}

TEST(Attempt, UnreachableTargetForcesLift) {
  auto env = env_with({action(2, {1})});
  Rng rng(3);
  const auto r = simulate_attempt(0, env, rng);
  EXPECT_EQ(r.lifted_quantity, 0);
  EXPECT_EQ(r.regrasps, env.max_regrasps);
  EXPECT_FALSE(r.voted);
}

TEST(Attempt, FalseLiftRateMatchesClosedForm) {
  auto sensor = SensorModel::perfect();
  sensor[Estimator::NonZero].false_positive_rate = 0.3;
  sensor[Estimator::Two].false_positive_rate = 0.5;
  auto env = env_with({action(2, {1})}, sensor);
  env.max_regrasps = 0;
  env.timesteps_per_attempt = 6;
  const double expected = testing::enumerated_trigger_probability(0.3, 0.5, 6, false);
  const int attempts = 200000;
  int voted = 0;
  Rng rng(17);
  for (int i = 0; i < attempts; ++i) voted += simulate_attempt(0, env, rng).voted ? 1 : 0;
  const double freq = static_cast<double>(voted) / attempts;
  EXPECT_NEAR(freq, expected, 4.0 * std::sqrt(expected * (1 - expected) / attempts));
  EXPECT_NEAR(attempt_model(0, env).trigger_probability[0], expected, 1e-12);
}

TEST(Attempt, ModelMatchesSteppedLoopAndSampling) {
  auto env = env_with({action(2, {.2, .3, .4, .1}), action(std::nullopt, {.1, .2, .3, .2, .2})},
                      SensorModel::simulation_preset());
  env.max_regrasps = 3;
  env.timesteps_per_attempt = 5;
  for (auto rule : {VotingRule::TargetAtStreakEnd, VotingRule::TargetInStreak}) {
    env.voting = rule;
    for (std::size_t a = 0; a < env.actions.size(); ++a) {
      const auto model = attempt_model(a, env);
      const auto in_pile = env.actions[a].action.distribution.probs();
      std::vector<double> trigger;
      for (std::size_t c = 0; c < in_pile.size(); ++c) {
        const int count = static_cast<int>(c);
        trigger.push_back(testing::enumerated_trigger_probability(
            env.sensor.fire_probability(Estimator::NonZero, count),
            env.sensor.fire_probability(env.actions[a].target_estimator, count), 5,
            rule == VotingRule::TargetInStreak));
      }
      double regrasps = 0.0;
      const auto stepped = testing::stepped_attempt_distribution({in_pile.begin(), in_pile.end()}, trigger,
                                                                 env.max_regrasps, &regrasps);
      for (std::size_t c = 0; c < stepped.size(); ++c) EXPECT_NEAR(model.lifted[c], stepped[c], 1e-12);
      EXPECT_NEAR(model.expected_regrasps, regrasps, 1e-12);

      const int draws = 100000;
      std::vector<double> freq(in_pile.size(), 0.0);
      double regrasp_sum = 0.0;
      Rng rng(5 + a);
      for (int i = 0; i < draws; ++i) {
        const auto r = simulate_attempt(a, env, rng);
        freq[static_cast<std::size_t>(r.lifted_quantity)] += 1.0 / draws;
        regrasp_sum += r.regrasps;
      }
      for (std::size_t c = 0; c < freq.size(); ++c) {
        const double p = stepped[c];
        EXPECT_NEAR(freq[c], p, 4.0 * std::sqrt(p * (1 - p) / draws) + 1e-12) << "count " << c;
      }
      EXPECT_NEAR(regrasp_sum / draws, regrasps, 0.05);
    }
  }
}

TEST(Attempt, DropsThinBinomially) {
  auto env = env_with({action(3, {0, 0, 0, 1})});
  env.routine = Routine::AlwaysLift;
  env.drop_on_lift_prob = 0.25;
  const auto model = attempt_model(0, env);
  const double keep = 0.75;
  EXPECT_NEAR(model.lifted[3], keep * keep * keep, 1e-15);
  EXPECT_NEAR(model.lifted[2], 3 * keep * keep * 0.25, 1e-15);
  EXPECT_NEAR(model.lifted[0], 0.25 * 0.25 * 0.25, 1e-15);
}

// ---------------------------------------------------------------- episodes

TEST(Episode, SingleObjectChain) {
  const auto env = env_with({action(1, {0, 1})});
  Rng rng(1);
  const auto r = run_episode(constant_policy(3, 0), 3, env, rng, true);
  EXPECT_EQ(r.transfers, 3);
  EXPECT_EQ(r.lifts, 3);
  EXPECT_EQ(r.regrasps, 0);
  EXPECT_EQ(r.final_count, 3);
  ASSERT_EQ(r.action_trace.size(), 3u);
  EXPECT_EQ(r.action_trace[2].state, 2);
}

TEST(Episode, ExactDivision) {
  const auto env = env_with({action(2, {0, 0, 1})});
  Rng rng(1);
  const auto r = run_episode(constant_policy(4, 0), 4, env, rng);
  EXPECT_EQ(r.transfers, 2);
  EXPECT_EQ(r.lifts, 2);
}

TEST(Episode, OvershootIsRejectedUntilTheCap) {
  auto env = env_with({action(3, {0, 0, 0, 1})});
  env.episode_cap = 50;
  Rng rng(1);
  const auto r = run_episode(constant_policy(4, 0), 4, env, rng, true);
  EXPECT_EQ(r.transfers, 1);
  EXPECT_EQ(r.lifts, 50);
  EXPECT_EQ(r.final_count, 3);
  EXPECT_TRUE(r.capped);
  EXPECT_FALSE(r.success(4));
  EXPECT_TRUE(r.action_trace[0].deposited);
  EXPECT_EQ(r.action_trace[1].lifted_quantity, 3);
  EXPECT_FALSE(r.action_trace[1].deposited);
}

TEST(Episode, EmptyTarget) {
  const auto env = single_object_environment(env_with({action(1, {0, 1})}));
  Rng rng(1);
  const auto r = run_episode(constant_policy(0, 0), 0, env, rng);
  EXPECT_EQ(r.transfers, 0);
  EXPECT_EQ(r.lifts, 0);
}

TEST(Episode, RejectsBadPolicy) {
  const auto env = env_with({action(1, {0, 1})});
  Rng rng(1);
  EXPECT_THROW(run_episode(constant_policy(2, 0), 3, env, rng), ValidationError);
  EXPECT_THROW(run_episode(constant_policy(3, 4), 3, env, rng), ValidationError);
}

TEST(Episode, InvariantsUnderNoise) {
  auto env = env_with({action(1, {.2, .7, .1}), action(2, {.1, .2, .5, .2}), action(3, {0, .2, .2, .6}),
                       action(std::nullopt, {.06, .16, .16, .42, .2})},
                      SensorModel::real_preset());
  env.drop_on_lift_prob = 0.05;
  const int n = 10;
  const auto naive = naive_policy_table(n, env, max_capacity(env));
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng = Rng::for_stream(42, seed);
    const auto r = run_episode(naive, n, env, rng, true);
    EXPECT_LE(r.transfers, r.lifts);
    EXPECT_LE(r.final_count, n);
    int deposited = 0;
    for (const auto& step : r.action_trace) deposited += step.deposited ? step.lifted_quantity : 0;
    EXPECT_EQ(deposited, r.final_count);
    EXPECT_EQ(static_cast<int>(r.action_trace.size()), r.lifts);
  }
}

// ---------------------------------------------------------------- policies

TEST(Policies, Naive) {
  EXPECT_EQ(naive_policy(0, 10, 4), "grasp-max");
  EXPECT_EQ(naive_policy(8, 10, 4), "grasp-2");
  EXPECT_EQ(naive_policy(6, 10, 5), "grasp-3");
  EXPECT_EQ(naive_policy(9, 10, 4), "grasp-1");
  EXPECT_EQ(naive_policy(6, 10, 4), "grasp-max");
  EXPECT_THROW(naive_policy(10, 10, 4), ValidationError);

  const auto env = env_with({action(std::nullopt, {.06, .16, .16, .42, .2}), action(1, {0, 1})});
  EXPECT_EQ(max_capacity(env), 4);
  EXPECT_THROW(naive_policy_table(10, env, 4), ValidationError);  // no grasp-2 or grasp-3
}

TEST(Policies, SingleObjectBaseline) {
  auto base = env_with({action(std::nullopt, {.06, .16, .16, .42, .2})}, SensorModel::real_preset());
  const auto env = single_object_environment(base);
  EXPECT_EQ(single_object_policy(), "grasp-1");
  for (int n : {0, 1, 10}) {
    const auto report = monte_carlo(constant_policy(n, 0), n, env, 500, 7);
    EXPECT_EQ(report.transfers.mean, n);
    EXPECT_EQ(report.lifts.mean, n);
    EXPECT_EQ(report.transfers.std_error, 0.0);
    EXPECT_EQ(report.lifts.std_error, 0.0);
    EXPECT_EQ(report.success_rate, 1.0);
  }
}

// ---------------------------------------------------------------- monte carlo and oracle

TEST(MonteCarlo, DeterministicAndScheduleIndependent) {
  auto env = env_with({action(2, {.2, .3, .4, .1}), action(1, {.1, .9})}, SensorModel::simulation_preset());
  const auto policy = mdp::Policy{{0, 0, 1, 0, 1}};
  const auto serial = run_episodes_serial(policy, 5, env, 3000, 11);
  EXPECT_EQ(serial, run_episodes_omp(policy, 5, env, 3000, 11));
  EXPECT_EQ(monte_carlo(policy, 5, env, 3000, 11), monte_carlo(policy, 5, env, 3000, 11));
  EXPECT_NE(monte_carlo(policy, 5, env, 3000, 11), monte_carlo(policy, 5, env, 3000, 12));
  EXPECT_THROW(monte_carlo(policy, 5, env, 0, 11), ValidationError);
}

TEST(MonteCarlo, DeterministicEnvironmentHasZeroError) {
  const auto env = env_with({action(2, {0, 0, 1})});
  const auto r = monte_carlo(constant_policy(6, 0), 6, env, 1000, 3);
  EXPECT_EQ(r.transfers.mean, 3.0);
  EXPECT_EQ(r.transfers.std_error, 0.0);
  EXPECT_EQ(r.lifts.std_error, 0.0);
}

TEST(Oracle, Examples) {
  const auto chain = exact_episode_expectation(constant_policy(3, 0), 3, env_with({action(1, {0, 1})}));
  ASSERT_TRUE(chain.uncapped);
  EXPECT_NEAR(chain.uncapped->transfers, 3, 1e-12);
  EXPECT_NEAR(chain.uncapped->lifts, 3, 1e-12);
  EXPECT_NEAR(chain.uncapped->regrasps, 0, 1e-12);
  EXPECT_NEAR(chain.capped.lifts, 3, 1e-12);
  EXPECT_NEAR(chain.success_probability, 1, 1e-12);

  auto coin_env = env_with({action(1, {.5, .5})});
  coin_env.max_regrasps = 0;
  const auto coin = exact_episode_expectation(constant_policy(1, 0), 1, coin_env);
  ASSERT_TRUE(coin.uncapped);
  EXPECT_NEAR(coin.uncapped->lifts, 2, 1e-10);
  EXPECT_NEAR(coin.uncapped->transfers, 1, 1e-10);
}

TEST(Oracle, ReportsStuckStates) {
  const auto env = env_with({action(3, {0, 0, 0, 1}), action(1, {0, 1})});
  const auto r = exact_episode_expectation(mdp::Policy{{0, 0, 1, 0}}, 4, env);
  EXPECT_FALSE(r.uncapped);
  EXPECT_EQ(r.stuck_states, (std::vector<int>{0, 3}));
  EXPECT_NEAR(r.success_probability, 0.0, 1e-15);
  EXPECT_NEAR(r.capped.lifts, env.episode_cap, 1e-9);
}

TEST(Oracle, UncappedAgreesWithAbsorptionSolve) {
  std::mt19937_64 gen(77);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 1 + rep % 6;
    auto env = env_with({}, rep % 2 ? SensorModel::simulation_preset() : SensorModel::real_preset());
    auto raw = testing::random_actions(gen, 1 + rep % 3, 4);
    for (std::size_t a = 0; a < raw.size(); ++a) {
      raw[a].id = grasp_action_id(static_cast<int>(a) + 1);
      raw[a].target_quantity = static_cast<int>(a) + 1;
      env.actions.push_back(make_action_model(raw[a]));
    }
    env.timesteps_per_attempt = 8;
    env.max_regrasps = 4;
    const auto mdp = mdp::TransferMdp::build(effective_actions(env), {n}, mdp::OvershootMode::Reject);
    testing::for_each_policy(static_cast<std::size_t>(n), env.actions.size(), [&](const mdp::Policy& policy) {
      const auto oracle = exact_episode_expectation(policy, n, env);
      const auto stats = mdp::exact_policy_stats(mdp, policy);
      if (!oracle.uncapped) {
        EXPECT_FALSE(std::isfinite(stats.expected_actions[0]));
        return;
      }
      EXPECT_NEAR(oracle.uncapped->lifts, stats.expected_actions[0], 1e-8 * std::max(1.0, stats.expected_actions[0]));
      EXPECT_NEAR(oracle.uncapped->transfers, stats.expected_deposits[0], 1e-8 * std::max(1.0, stats.expected_deposits[0]));
      EXPECT_LE(oracle.capped.lifts, oracle.uncapped->lifts + 1e-9);
    });
  }
}

TEST(Oracle, AlwaysLiftMatchesIndependentMonteCarlo) {
  auto env = env_with({action(1, {.25, .5, .25})});
  env.routine = Routine::AlwaysLift;
  const auto policy = constant_policy(2, 0);
  const auto exact = exact_episode_expectation(policy, 2, env);
  const auto mc = testing::monte_carlo_actions_to_goal(env.grasp_actions(), 2, policy, 200000, 8);
  ASSERT_TRUE(exact.uncapped);
  EXPECT_NEAR(exact.uncapped->lifts, 8.0 / 3, 1e-12);
  EXPECT_NEAR(mc.mean, exact.uncapped->lifts, 3 * mc.std_error);
}

TEST(Oracle, MonteCarloWithinThreeStandardErrors) {
  std::mt19937_64 gen(2024);
  int agree = 0;
  const int configs = 10;
  for (int c = 0; c < configs; ++c) {
    auto env = env_with({}, c % 2 ? SensorModel::simulation_preset() : SensorModel::real_preset());
    for (int a = 1; a <= 3; ++a) env.actions.push_back(make_action_model(
        {grasp_action_id(a), a, testing::random_distribution(gen, 4)}));
    env.routine = c % 3 == 0 ? Routine::AlwaysLift : Routine::VotingGated;
    env.drop_on_lift_prob = c % 4 == 0 ? 0.1 : 0.0;
    const int n = 2 + c % 5;
    mdp::Policy policy;
    for (int s = 0; s < n; ++s) policy.action_for.push_back(static_cast<std::size_t>((s + c) % 3));
    const auto exact = exact_episode_expectation(policy, n, env);
    const auto mc = monte_carlo(policy, n, env, 40000, 1000 + c);
    const bool ok = std::abs(mc.transfers.mean - exact.capped.transfers) <= 3 * mc.transfers.std_error + 1e-12 &&
                    std::abs(mc.lifts.mean - exact.capped.lifts) <= 3 * mc.lifts.std_error + 1e-12;
    agree += ok ? 1 : 0;
  }
  EXPECT_GE(agree, configs - 1);
}

TEST(Oracle, PlannedPolicyNeverNeedsMoreLiftsThanNaive) {
  // Exhaustive exact comparison over a small matrix of environments.
  std::mt19937_64 gen(31);
  int checked = 0;
  for (int rep = 0; rep < 60; ++rep) {
    EnvironmentConfig env;
    for (int k = 1; k <= 3; ++k) {
      std::vector<double> p(6, 0.0);
      p[static_cast<std::size_t>(k)] = 0.6;
      p[static_cast<std::size_t>(k - 1)] = 0.2;
      p[static_cast<std::size_t>(k + 1)] = 0.2;
      env.actions.push_back(make_action_model({grasp_action_id(k), k, OutcomeDistribution(p)}));
    }
    env.actions.push_back(make_action_model({"grasp-max", std::nullopt, testing::random_distribution(gen, 5)}));
    env.sensor = rep % 2 ? SensorModel::simulation_preset() : SensorModel::perfect();
    env.routine = rep % 3 == 0 ? Routine::AlwaysLift : Routine::VotingGated;
    const int n = 2 + rep % 9;
    const int capacity = max_capacity(env);
    if (capacity < 1) continue;
    const auto naive = naive_policy_table(n, env, capacity);
    const auto mdp = mdp::TransferMdp::build(effective_actions(env), {n}, mdp::OvershootMode::Reject);
    const auto solved = mdp::value_iteration(mdp, {});
    const auto planned = exact_episode_expectation(solved.policy, n, env);
    const auto baseline = exact_episode_expectation(naive, n, env);
    ASSERT_TRUE(planned.uncapped);
    if (!baseline.uncapped) continue;
    EXPECT_LE(planned.uncapped->lifts, baseline.uncapped->lifts + 1e-9) << "rep " << rep;
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

}  // namespace
}  // namespace mogt::sim
