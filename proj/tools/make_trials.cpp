// Writes a synthetic trial log with one planted high-yield region.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mogt/errors.hpp"
#include "mogt/grasp/synthetic.hpp"
#include "mogt/grasp/trial_log.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic grasp trial log", "make_trials"};
  std::uint64_t seed = 0;
  std::string out_path;
  mogt::grasp::SyntheticTrialSpec spec;
  mogt::grasp::PlantedRegion planted{120.0, 60.0, 90.0, 40.0, 70.0,
                                     mogt::OutcomeDistribution({0.02, 0.08, 0.15, 0.45, 0.2, 0.1})};
  bool no_planted = false;

  app.add_option("--seed", seed, "Generator seed")->required();
  app.add_option("--out", out_path, "Output file (stdout when omitted)");
  app.add_option("--spread-step", spec.spread_step_deg, "Grid spread step (deg)");
  app.add_option("--finger-step", spec.finger_step_deg, "Grid finger step (deg)");
  app.add_option("--trials-per-pregrasp", spec.trials_per_pregrasp)->check(CLI::PositiveNumber);
  app.add_option("--planted-spread", planted.spread_deg, "Spread of the planted region (deg)");
  app.add_flag("--no-planted", no_planted, "Draw every pre-grasp from the background distribution");
  CLI11_PARSE(app, argc, argv);

  // Two end-grasp modes; the tighter closure is the dominant one.
  spec.end_modes = {{{0.0, 25.0, 25.0}, 3.0}, {{0.0, 10.0, 35.0}, 1.0}};
  if (!no_planted) spec.planted = planted;

  try {
    const auto set = mogt::grasp::generate_synthetic_trials(spec, seed);
    if (out_path.empty()) {
      mogt::grasp::write_trial_log(std::cout, set);
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw mogt::IoError("cannot write " + out_path);
      mogt::grasp::write_trial_log(out, set);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
