#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mogt/app/config.hpp"
#include "mogt/app/report.hpp"

namespace mogt::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitNonConvergence = 4,
  kExitEpisodeCap = 5,
  kExitIo = 6,
};

/// Value iteration stopped at max_iterations above epsilon.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& message, double residual)
      : std::runtime_error(message), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct CommandResult {
  Report report;
  int exit_code = kExitOk;
};

struct PregraspRequest {
  /// ppg, cppg, bepg, mcpg or endgrasp.
  std::string kind;
  std::optional<std::filesystem::path> trials;
  std::optional<std::filesystem::path> evaluation;
  std::optional<std::uint64_t> seed;
  std::optional<int> target_q;
  std::optional<std::string> pregrasp;
  int m_max = 5;
  double keep_fraction = 0.25;
  std::optional<double> min_score;
  std::size_t k_max = 8;
  std::size_t steps = 20;
  /// mcpg without a trial log scans a generated grid with these steps.
  double spread_step = 20.0;
  double finger_step = 3.0;
};

CommandResult run_pregrasp(const PregraspRequest& request);
/// Writes "state action" lines to policy_out when given.
CommandResult run_solve(const ExperimentConfig& config, const std::optional<std::filesystem::path>& policy_out = {});
/// policy: single, naive, mdp, or the path of a policy file.
CommandResult run_simulate(const ExperimentConfig& config, const std::string& policy, std::uint64_t seed);
CommandResult run_compare(const ExperimentConfig& config, std::uint64_t seed);

/// Policy file: "state action_id" per line; '#' comments and blank lines ignored.
mdp::Policy load_policy_file(const std::filesystem::path& path, int target_n, const sim::EnvironmentConfig& env);

/// Full command line front end. Reports go to `out` (and --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mogt::app
