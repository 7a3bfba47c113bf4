#pragma once

#include <cstddef>
#include <span>

#include "mogt/mdp/transfer_mdp.hpp"

namespace mogt::mdp {

// One synchronous Bellman sweep: next[s] = max_a Q(s, a) computed from `current`,
// best_action[s] = argmax (lowest index on ties). Terminal states get 0.
// Returns max_s |next[s] - current[s]|.
//
// The OpenMP kernel parallelizes over states and must match the serial
// reference bit for bit; each state's backup is computed in the same order.

double bellman_sweep_serial(const TransferMdp& mdp, double discount, std::span<const double> current,
                            std::span<double> next, std::span<std::size_t> best_action);

double bellman_sweep_omp(const TransferMdp& mdp, double discount, std::span<const double> current,
                         std::span<double> next, std::span<std::size_t> best_action);

}  // namespace mogt::mdp
