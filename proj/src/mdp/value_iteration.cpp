#include "mogt/mdp/value_iteration.hpp"

#include <cmath>
#include <limits>
#include <queue>

#include <fmt/format.h>

#include "mogt/errors.hpp"
#include "mogt/mdp/bellman_kernels.hpp"

namespace mogt::mdp {

double action_value(const TransferMdp& mdp, std::span<const double> values, double discount,
                    std::size_t state, std::size_t action) {
  double q = 0.0;
  for (const auto& t : mdp.transitions(state, action)) {
    q += t.probability * (t.reward + discount * values[t.next]);
  }
  return q;
}

Policy greedy_policy(const TransferMdp& mdp, std::span<const double> values, double discount) {
  Policy policy;
  policy.action_for.resize(mdp.num_decision_states());
  for (std::size_t s = 0; s < mdp.num_decision_states(); ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
      const double q = action_value(mdp, values, discount, s, a);
      if (q > best) {
        best = q;
        policy.action_for[s] = a;
      }
    }
  }
  return policy;
}

bool has_nonnegative_reachable_cycle(const TransferMdp& mdp) {
  const std::size_t n = mdp.num_decision_states();
  constexpr double kNone = -std::numeric_limits<double>::infinity();

  // Reachability from state 0 over every action.
  std::vector<bool> reachable(mdp.num_states(), false);
  std::queue<std::size_t> frontier;
  reachable[0] = true;
  frontier.push(0);
  while (!frontier.empty()) {
    const std::size_t s = frontier.front();
    frontier.pop();
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
      for (const auto& t : mdp.transitions(s, a)) {
        if (t.probability > 0.0 && !reachable[t.next]) {
          reachable[t.next] = true;
          frontier.push(t.next);
        }
      }
    }
  }

  // Max-weight walks between non-terminal states (Floyd-Warshall). A cycle of
  // total reward >= 0 through i exists iff best[i][i] >= 0 afterwards.
  std::vector<double> best(n * n, kNone);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
      for (const auto& t : mdp.transitions(s, a)) {
        if (t.probability > 0.0 && t.next < n) {
          double& w = best[s * n + t.next];
          w = std::max(w, t.reward);
        }
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ik = best[i * n + k];
      if (ik == kNone) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double kj = best[k * n + j];
        if (kj == kNone) continue;
        best[i * n + j] = std::max(best[i * n + j], ik + kj);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (reachable[i] && best[i * n + i] >= 0.0) return true;
  }
  return false;
}

void validate_policy(const TransferMdp& mdp, const Policy& policy) {
  if (policy.action_for.size() != mdp.num_decision_states()) {
    throw ValidationError(fmt::format("policy covers {} states, MDP has {} non-terminal states",
                                      policy.action_for.size(), mdp.num_decision_states()));
  }
  for (std::size_t s = 0; s < policy.action_for.size(); ++s) {
    if (policy.action_for[s] >= mdp.num_actions()) {
      throw ValidationError(fmt::format("policy action {} at state {} does not exist", policy.action_for[s], s));
    }
  }
}

SolveResult value_iteration(const TransferMdp& mdp, const SolverConfig& config) {
  if (!(config.discount > 0.0 && config.discount <= 1.0)) {
    throw ValidationError(fmt::format("discount must lie in (0, 1], got {}", config.discount));
  }
  if (!(config.epsilon > 0.0)) {
    throw ValidationError("epsilon must be positive");
  }
  if (config.discount == 1.0 && has_nonnegative_reachable_cycle(mdp)) {
    throw DivergenceError(
        "undiscounted value iteration refused: a cycle with non-negative total reward is reachable from state 0");
  }

  const std::size_t num_states = mdp.num_states();
  std::vector<double> current(num_states, 0.0);
  std::vector<double> next(num_states, 0.0);
  std::vector<std::size_t> best_action(num_states, 0);

  SolveResult result;
  const auto sweep = config.execution == Execution::Serial ? bellman_sweep_serial : bellman_sweep_omp;
  while (result.iterations < config.max_iterations) {
    const double residual = sweep(mdp, config.discount, current, next, best_action);
    ++result.iterations;
    result.residual = residual;
    result.residual_history.push_back(residual);
    std::swap(current, next);
    if (residual < config.epsilon) {
      result.converged = true;
      break;
    }
  }

  result.value.values = std::move(current);
  result.policy = greedy_policy(mdp, result.value.values, config.discount);
  return result;
}

}  // namespace mogt::mdp
