#include "mogt/mdp/bellman_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

namespace mogt::mdp {

namespace {

inline void backup_state(const TransferMdp& mdp, double discount, std::span<const double> current,
                         std::size_t s, double& value, std::size_t& action) {
  if (mdp.is_terminal(s)) {
    value = 0.0;
    action = 0;
    return;
  }
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_a = 0;
  for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
    double q = 0.0;
    for (const auto& t : mdp.transitions(s, a)) {
      q += t.probability * (t.reward + discount * current[t.next]);
    }
    if (q > best) {
      best = q;
      best_a = a;
    }
  }
  value = best;
  action = best_a;
}

}  // namespace

double bellman_sweep_serial(const TransferMdp& mdp, double discount, std::span<const double> current,
                            std::span<double> next, std::span<std::size_t> best_action) {
  double residual = 0.0;
  for (std::size_t s = 0; s < mdp.num_states(); ++s) {
    backup_state(mdp, discount, current, s, next[s], best_action[s]);
    residual = std::max(residual, std::abs(next[s] - current[s]));
  }
  return residual;
}

double bellman_sweep_omp(const TransferMdp& mdp, double discount, std::span<const double> current,
                         std::span<double> next, std::span<std::size_t> best_action) {
  const auto num_states = static_cast<std::ptrdiff_t>(mdp.num_states());
  double residual = 0.0;
#pragma omp parallel for schedule(static) reduction(max : residual)
  for (std::ptrdiff_t i = 0; i < num_states; ++i) {
    const auto s = static_cast<std::size_t>(i);
    backup_state(mdp, discount, current, s, next[s], best_action[s]);
    residual = std::max(residual, std::abs(next[s] - current[s]));
  }
  return residual;
}

}  // namespace mogt::mdp
