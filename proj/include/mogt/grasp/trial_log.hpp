#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mogt/grasp/pregrasp.hpp"

namespace mogt::grasp {

/// Default hand capacity: the most objects one grasp is expected to hold.
inline constexpr int kDefaultMaxObjects = 5;

/// One execution of the grasping routine from a pre-grasp.
struct GraspTrial {
  std::string pregrasp_id;
  JointVector end_config_deg{};
  int outcome_count = 0;
};

/// Parsed trial log: the distinct pre-grasps (first-appearance order) and every trial.
struct TrialSet {
  std::vector<PreGrasp> pregrasps;
  std::vector<GraspTrial> trials;
  int m_max = kDefaultMaxObjects;

  const PreGrasp* find_pregrasp(const std::string& id) const;
  /// Trials recorded for one pre-grasp, in file order.
  std::vector<GraspTrial> trials_for(const std::string& id) const;
};

// Trial log format: UTF-8 text, one record per line, fields separated by tabs
// or spaces. A header line naming the six fields in order is required:
//
//   pregrasp_id  spread_deg  finger_left_deg  finger_right_deg  end_config_deg  outcome_count
//
// end_config_deg is a comma-joined list of kHandDof angles. Blank lines and
// lines starting with '#' are ignored. Every record of the same pre-grasp must
// repeat the same three angles.

/// Throws ParseError (with the 1-based line number) on malformed input and
/// IoError when the file cannot be opened.
TrialSet parse_trial_log(std::istream& in, int m_max = kDefaultMaxObjects);
TrialSet load_trial_log(const std::filesystem::path& path, int m_max = kDefaultMaxObjects);

void write_trial_log(std::ostream& out, const TrialSet& set);

}  // namespace mogt::grasp
