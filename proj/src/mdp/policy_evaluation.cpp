#include "mogt/mdp/policy_evaluation.hpp"

#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::mdp {

std::vector<double> evaluate_policy(const TransferMdp& mdp, const Policy& policy, double discount) {
  validate_policy(mdp, policy);
  const auto n = static_cast<Eigen::Index>(mdp.num_decision_states());

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    for (const auto& t : mdp.transitions(static_cast<std::size_t>(s), policy.action_for[s])) {
      rhs(s) += t.probability * t.reward;
      if (!mdp.is_terminal(t.next)) {
        system(s, static_cast<Eigen::Index>(t.next)) -= discount * t.probability;
      }
    }
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) {
    throw ValidationError(fmt::format("policy evaluation is singular at discount {}", discount));
  }
  const Eigen::VectorXd solution = lu.solve(rhs);

  std::vector<double> values(mdp.num_states(), 0.0);
  for (Eigen::Index s = 0; s < n; ++s) values[static_cast<std::size_t>(s)] = solution(s);
  return values;
}

PolicyStats exact_policy_stats(const TransferMdp& mdp, const Policy& policy) {
  validate_policy(mdp, policy);
  const std::size_t n = mdp.num_decision_states();

  // First pass: states with a positive-probability path to a terminal.
  std::vector<bool> absorbs(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (absorbs[s]) continue;
      for (const auto& t : mdp.transitions(s, policy.action_for[s])) {
        if (t.probability > 0.0 && (mdp.is_terminal(t.next) || absorbs[t.next])) {
          absorbs[s] = true;
          changed = true;
          break;
        }
      }
    }
  }

  // Absorption is certain only if every state reachable from s also has such
  // a path; otherwise the expected counts diverge.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (!absorbs[s]) continue;
      for (const auto& t : mdp.transitions(s, policy.action_for[s])) {
        if (t.probability > 0.0 && !mdp.is_terminal(t.next) && !absorbs[t.next]) {
          absorbs[s] = false;
          changed = true;
          break;
        }
      }
    }
  }

  PolicyStats stats;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  stats.expected_actions.assign(n, kInf);
  stats.expected_deposits.assign(n, kInf);

  // The remaining states only transition into terminals or each other.
  std::vector<Eigen::Index> index(n, -1);
  Eigen::Index m = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (absorbs[s]) {
      index[s] = m++;
    } else {
      stats.unreachable.push_back(s);
    }
  }
  if (m == 0) return stats;

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, 2);
  for (std::size_t s = 0; s < n; ++s) {
    if (!absorbs[s]) continue;
    const Eigen::Index row = index[s];
    rhs(row, 0) = 1.0;
    for (const auto& t : mdp.transitions(s, policy.action_for[s])) {
      if (t.deposit) rhs(row, 1) += t.probability;
      if (!mdp.is_terminal(t.next)) system(row, index[t.next]) -= t.probability;
    }
  }
  const Eigen::MatrixXd solution = system.fullPivLu().solve(rhs);
  for (std::size_t s = 0; s < n; ++s) {
    if (!absorbs[s]) continue;
    stats.expected_actions[s] = solution(index[s], 0);
    stats.expected_deposits[s] = solution(index[s], 1);
  }
  return stats;
}

}  // namespace mogt::mdp
