#pragma once

#include <cstddef>
#include <vector>

#include "mogt/mdp/transfer_mdp.hpp"
#include "mogt/mdp/value_iteration.hpp"

namespace mogt::mdp {

/// Exact discounted value of a fixed policy, solving (I - discount * P_pi) V = r_pi
/// by dense LU. Terminal values are 0. Throws ValidationError when the system is
/// singular (discount == 1 with a policy that never terminates from some state).
std::vector<double> evaluate_policy(const TransferMdp& mdp, const Policy& policy, double discount);

/// Expected number of actions and deposits until absorption, per start state.
struct PolicyStats {
  std::vector<double> expected_actions;
  std::vector<double> expected_deposits;
  /// Non-terminal states from which no terminal state is reachable under the
  /// policy; their entries above are +infinity.
  std::vector<std::size_t> unreachable;

  bool all_reachable() const noexcept { return unreachable.empty(); }
};

/// Solves E[s] = 1 + sum p(s, pi(s), s') E[s'] (and the deposit analogue)
/// over the states that reach absorption.
PolicyStats exact_policy_stats(const TransferMdp& mdp, const Policy& policy);

}  // namespace mogt::mdp
