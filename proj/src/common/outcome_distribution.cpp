#include "mogt/outcome_distribution.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mogt/errors.hpp"
#include "mogt/grasp_action.hpp"

namespace mogt {

OutcomeDistribution::OutcomeDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw ValidationError("outcome distribution needs at least one entry");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw ValidationError(fmt::format("outcome probability p{} = {} is outside [0, 1]", i, p));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw ValidationError(fmt::format("outcome probabilities sum to {:.12g}, not 1", total));
  }
}

OutcomeDistribution OutcomeDistribution::point_mass(std::size_t count) {
  std::vector<double> probs(count + 1, 0.0);
  probs[count] = 1.0;
  return OutcomeDistribution(std::move(probs));
}

OutcomeDistribution OutcomeDistribution::from_counts(std::span<const std::size_t> counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) {
    throw ValidationError("cannot build a distribution from zero observations");
  }
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return OutcomeDistribution(std::move(probs));
}

double OutcomeDistribution::mean() const noexcept {
  double sum = 0.0;
  for (std::size_t i = 1; i < probs_.size(); ++i) {
    sum += static_cast<double>(i) * probs_[i];
  }
  return sum;
}

OutcomeDistribution OutcomeDistribution::resized(std::size_t max_count) const {
  std::vector<double> probs(max_count + 1, 0.0);
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (i <= max_count) {
      probs[i] = probs_[i];
    } else if (probs_[i] != 0.0) {
      throw ValidationError(
          fmt::format("cannot truncate distribution to max count {}: p{} = {}", max_count, i, probs_[i]));
    }
  }
  return OutcomeDistribution(std::move(probs));
}

std::string OutcomeDistribution::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    out += fmt::format("{}{:.6g}", i == 0 ? "" : ", ", probs_[i]);
  }
  return out + "}";
}

std::string grasp_action_id(std::optional<int> target_quantity) {
  return target_quantity ? fmt::format("grasp-{}", *target_quantity) : std::string("grasp-max");
}

std::optional<std::size_t> find_action(std::span<const GraspAction> actions, const std::string& id) {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].id == id) return i;
  }
  return std::nullopt;
}

void validate_actions(std::span<const GraspAction> actions) {
  if (actions.empty()) {
    throw ValidationError("action list is empty");
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto& action = actions[i];
    if (action.id.empty()) {
      throw ValidationError(fmt::format("action {} has an empty id", i));
    }
    if (action.target_quantity && *action.target_quantity < 1) {
      throw ValidationError(fmt::format("action '{}' targets {} objects; must be >= 1", action.id,
                                        *action.target_quantity));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (actions[j].id == action.id) {
        throw ValidationError(fmt::format("duplicate action id '{}'", action.id));
      }
    }
  }
}

}  // namespace mogt
