#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mogt/outcome_distribution.hpp"

namespace mogt {

/// A multi-object grasp action: an intended quantity (or "as many as possible")
/// and the distribution over how many objects an attempt actually yields.
struct GraspAction {
  std::string id;
  /// Intended object count; nullopt marks a maximum-capacity grasp.
  std::optional<int> target_quantity;
  OutcomeDistribution distribution;

  bool is_max() const noexcept { return !target_quantity.has_value(); }
};

/// Canonical id for an exact-quantity grasp ("grasp-3") or the max grasp ("grasp-max").
std::string grasp_action_id(std::optional<int> target_quantity);

/// Index of the action with the given id, or nullopt.
std::optional<std::size_t> find_action(std::span<const GraspAction> actions, const std::string& id);

/// Throws ValidationError on an empty list, duplicate ids, or a non-positive target quantity.
void validate_actions(std::span<const GraspAction> actions);

}  // namespace mogt
