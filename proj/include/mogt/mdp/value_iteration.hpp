#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mogt/execution.hpp"
#include "mogt/mdp/transfer_mdp.hpp"

namespace mogt::mdp {

/// V(s) for every state; terminal states are pinned to 0.
struct ValueFunction {
  std::vector<double> values;
};

/// Action index for each non-terminal state 0..n-1.
struct Policy {
  std::vector<std::size_t> action_for;

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct SolverConfig {
  double discount = 0.95;
  double epsilon = 1e-6;
  std::size_t max_iterations = 10000;
  Execution execution = Execution::Parallel;
};

struct SolveResult {
  ValueFunction value;
  Policy policy;
  std::size_t iterations = 0;
  /// Max-norm change of the last sweep.
  double residual = 0.0;
  bool converged = false;
  /// Residual of every sweep, in order.
  std::vector<double> residual_history;
};

/// Synchronous value iteration from V = 0 until the max-norm Bellman residual
/// drops below epsilon or max_iterations sweeps have run (converged = false).
/// The returned policy is greedy with respect to the returned V, ties going to
/// the lowest action index.
///
/// Throws ValidationError for discount outside (0, 1] or epsilon <= 0, and
/// DivergenceError for discount == 1 when a cycle with non-negative total
/// reward is reachable from state 0.
SolveResult value_iteration(const TransferMdp& mdp, const SolverConfig& config = {});

/// Q(s, a) = sum over s' of p(s, a, s') [r + discount * V(s')].
double action_value(const TransferMdp& mdp, std::span<const double> values, double discount,
                    std::size_t state, std::size_t action);

Policy greedy_policy(const TransferMdp& mdp, std::span<const double> values, double discount);

/// True when some cycle of positive-probability transitions among non-terminal
/// states, reachable from state 0, has total reward >= 0.
bool has_nonnegative_reachable_cycle(const TransferMdp& mdp);

/// Throws ValidationError unless the policy covers every non-terminal state
/// with a valid action index.
void validate_policy(const TransferMdp& mdp, const Policy& policy);

}  // namespace mogt::mdp
