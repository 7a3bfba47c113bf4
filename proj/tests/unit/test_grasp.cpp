#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mogt/errors.hpp"
#include "mogt/grasp/hand_model.hpp"
#include "mogt/grasp/hull.hpp"
#include "mogt/grasp/kmeans.hpp"
#include "mogt/grasp/pregrasp.hpp"
#include "mogt/grasp/selection.hpp"
#include "mogt/grasp/statistics.hpp"
#include "mogt/grasp/synthetic.hpp"
#include "mogt/grasp/trial_log.hpp"
#include "support/oracles.hpp"

namespace mogt::grasp {
namespace {

std::vector<GraspTrial> trials_with(const std::vector<int>& outcomes, const std::string& id = "pg") {
  std::vector<GraspTrial> out;
  for (int o : outcomes) out.push_back({id, {0.0, 30.0, 30.0}, o});
  return out;
}

void expect_dist(const OutcomeDistribution& d, const std::vector<double>& expected, double tol = 1e-12) {
  ASSERT_GE(d.size(), expected.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_NEAR(d[i], i < expected.size() ? expected[i] : 0.0, tol) << "entry " << i;
  }
}

std::vector<JointVector> random_points(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> angle(0.0, 90.0);
  std::vector<JointVector> points(n);
  for (auto& p : points) p = {angle(gen), angle(gen), angle(gen)};
  return points;
}

// ---------------------------------------------------------------- grid

TEST(Grid, CountsIncludeBothEndpoints) {
  EXPECT_EQ(generate_pregrasp_grid(20, 3).size(), 19u * 21u * 21u);
  EXPECT_EQ(generate_pregrasp_grid(180, 60).size(), 12u);
  const auto small = generate_pregrasp_grid(360, 60);
  ASSERT_EQ(small.size(), 8u);
  EXPECT_EQ(small.front().joints(), (JointVector{0, 30, 30}));
  EXPECT_EQ(small[1].joints(), (JointVector{0, 30, 90}));
  EXPECT_EQ(small.back().joints(), (JointVector{360, 90, 90}));
}

TEST(Grid, IdsAreUniqueAndOrdered) {
  const auto grid = generate_pregrasp_grid(20, 3);
  EXPECT_EQ(grid.front().id, "pg00000");
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LT(grid[i - 1].id, grid[i].id);
}

TEST(Grid, RejectsBadSteps) {
  EXPECT_THROW(generate_pregrasp_grid(0, 3), ValidationError);
  EXPECT_THROW(generate_pregrasp_grid(20, -1), ValidationError);
  EXPECT_THROW(generate_pregrasp_grid(70, 3), ValidationError);
}

TEST(PreGraspType, Bounds) {
  EXPECT_NO_THROW((PreGrasp{"a", 360, 30, 90}.validate()));
  EXPECT_THROW((PreGrasp{"a", 361, 30, 90}.validate()), ValidationError);
  EXPECT_THROW((PreGrasp{"a", 0, 29, 90}.validate()), ValidationError);
  EXPECT_THROW(ObjectSpec{0.0}.validate(), ValidationError);
  EXPECT_NO_THROW(ObjectSpec{}.validate());
}

// ---------------------------------------------------------------- statistics

TEST(Statistics, PpgFrequencies) {
  expect_dist(compute_ppg(trials_with({0, 1, 1, 2, 0, 1, 1, 1, 3, 1}), 5), {.2, .6, .1, .1});
  expect_dist(compute_ppg(trials_with({2, 2, 2}), 5), {0, 0, 1});
  EXPECT_THROW(compute_ppg({}, 5), ValidationError);
  auto mixed = trials_with({1, 2});
  mixed[1].pregrasp_id = "other";
  EXPECT_THROW(compute_ppg(mixed, 5), ValidationError);
}

TEST(Statistics, PpgConvergesToSamplingDistribution) {
  std::mt19937_64 gen(11);
  std::bernoulli_distribution one(0.3);
  std::vector<int> outcomes;
  for (int i = 0; i < 100; ++i) outcomes.push_back(one(gen) ? 1 : 0);
  const auto d = compute_ppg(trials_with(outcomes), 5);
  EXPECT_LT(std::abs(d[0] - 0.7) + std::abs(d[1] - 0.3), 0.15);
}

TEST(Statistics, AgpOfReferenceDistributions) {
  EXPECT_NEAR(compute_agp(OutcomeDistribution({.06, .16, .16, .42, .20})), 2.54, 1e-12);
  EXPECT_NEAR(compute_agp(OutcomeDistribution({.80, .10, .10, 0, 0})), 0.30, 1e-12);
  EXPECT_EQ(compute_agp(OutcomeDistribution({1.0})), 0.0);
}

TEST(Statistics, AgpIsLinearInMixtures) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto p = testing::random_distribution(gen, 5);
    const auto q = testing::random_distribution(gen, 5);
    const double alpha = unit(gen);
    std::vector<double> mix(6);
    double total = 0.0;
    for (std::size_t i = 0; i < 6; ++i) total += mix[i] = alpha * p[i] + (1 - alpha) * q[i];
    for (auto& x : mix) x /= total;
    EXPECT_NEAR(compute_agp(OutcomeDistribution(mix)), alpha * compute_agp(p) + (1 - alpha) * compute_agp(q), 1e-12);
  }
}

TEST(Statistics, SrgCounts) {
  expect_dist(compute_srg(trials_with({2, 2, 3}), 5), {0, 0, 2.0 / 3, 1.0 / 3});
  expect_dist(compute_srg(trials_with({1}), 5), {0, 1});
  EXPECT_THROW(compute_srg({}, 5), ValidationError);
}

TEST(Statistics, SrgTracksMixtureWeights) {
  std::mt19937_64 gen(3);
  std::discrete_distribution<int> mixture({0.0, 0.25, 0.5, 0.25});
  std::vector<int> outcomes;
  for (int i = 0; i < 20000; ++i) outcomes.push_back(mixture(gen));
  expect_dist(compute_srg(trials_with(outcomes), 5), {0, .25, .5, .25}, 0.02);
}

TEST(Statistics, EstimateDistribution) {
  std::vector<int> uniform;
  for (int k = 0; k < 5; ++k) uniform.insert(uniform.end(), 10, k);
  expect_dist(estimate_distribution(trials_with(uniform), 4, Smoothing::None), {.2, .2, .2, .2, .2});
  expect_dist(estimate_distribution(trials_with({3, 3}), 4, Smoothing::AddOne),
              {1.0 / 7, 1.0 / 7, 1.0 / 7, 3.0 / 7, 1.0 / 7});
  EXPECT_THROW(estimate_distribution({}, 4, Smoothing::None), ValidationError);
  EXPECT_EQ(parse_smoothing("add_one"), Smoothing::AddOne);
  EXPECT_THROW(parse_smoothing("laplace"), ValidationError);
}

TEST(Statistics, EstimatesAlwaysNormalize) {
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<int> count(0, 5);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int> outcomes(1 + rep % 17);
    for (auto& o : outcomes) o = count(gen);
    for (auto s : {Smoothing::None, Smoothing::AddOne}) {
      const auto d = estimate_distribution(trials_with(outcomes), 5, s);
      double total = 0.0;
      for (double p : d.probs()) {
        EXPECT_GE(p, 0.0);
        total += p;
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TrialSet two_spread_set(const std::vector<int>& a, const std::vector<int>& b) {
  TrialSet set;
  set.pregrasps = {{"a", 0, 30, 30}, {"b", 20, 30, 30}};
  for (int o : a) set.trials.push_back({"a", {}, o});
  for (int o : b) set.trials.push_back({"b", {}, o});
  return set;
}

TEST(Statistics, BestSpread) {
  const auto set = two_spread_set({2, 2, 0, 0, 1}, {2, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_EQ(select_best_spread(set, Criterion::target_quantity(2)).spread_deg, 0.0);
  const auto tie = two_spread_set({1, 2}, {2, 1});
  EXPECT_EQ(select_best_spread(tie, Criterion::agp()).spread_deg, 0.0);
  EXPECT_EQ(select_best_spread(tie, Criterion::target_quantity(2)).spread_deg, 0.0);
  EXPECT_THROW(select_best_spread(TrialSet{}, Criterion::agp()), ValidationError);
}

TEST(Statistics, PlantedSpreadRecovered) {
  SyntheticTrialSpec spec;
  spec.planted = PlantedRegion{240, 30, 90, 30, 90, OutcomeDistribution({0, .1, .8, .1})};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto set = generate_synthetic_trials(spec, seed);
    EXPECT_EQ(select_best_spread(set, Criterion::target_quantity(2)).spread_deg, 240.0);
  }
}

// ---------------------------------------------------------------- trial log

constexpr const char* kLog =
    "pregrasp_id\tspread_deg\tfinger_left_deg\tfinger_right_deg\tend_config_deg\toutcome_count\n"
    "# comment\n"
    "pg0\t0\t30\t30\t0,50,50\t2\n"
    "\n"
    "pg1  20  33  36  20,60.5,61  0\n"
    "pg0\t0\t30\t30\t1,49,52\t3\n";

TEST(TrialLog, ParsesAndRoundTrips) {
  std::istringstream in(kLog);
  const auto set = parse_trial_log(in);
  ASSERT_EQ(set.pregrasps.size(), 2u);
  ASSERT_EQ(set.trials.size(), 3u);
  EXPECT_EQ(set.pregrasps[1], (PreGrasp{"pg1", 20, 33, 36}));
  EXPECT_EQ(set.trials[1].end_config_deg, (JointVector{20, 60.5, 61}));
  EXPECT_EQ(set.trials_for("pg0").size(), 2u);

  std::ostringstream out;
  write_trial_log(out, set);
  std::istringstream again(out.str());
  const auto reread = parse_trial_log(again);
  EXPECT_EQ(reread.pregrasps, set.pregrasps);
  ASSERT_EQ(reread.trials.size(), set.trials.size());
  for (std::size_t i = 0; i < set.trials.size(); ++i) {
    EXPECT_EQ(reread.trials[i].end_config_deg, set.trials[i].end_config_deg);
    EXPECT_EQ(reread.trials[i].outcome_count, set.trials[i].outcome_count);
  }
}

std::size_t error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_trial_log(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(TrialLog, ErrorsCiteTheLine) {
  const std::string header =
      "pregrasp_id spread_deg finger_left_deg finger_right_deg end_config_deg outcome_count\n";
  const std::string good = "pg0 0 30 30 0,40,40 1\n";
  EXPECT_EQ(error_line(header + good + good + "pg0 0 30 30 0,40 1\n"), 4u);
  EXPECT_EQ(error_line(header + good + "pg0 0 30 30 0,40,40 9\n"), 3u);
  EXPECT_EQ(error_line(header + good + "pg0 0 30 31 0,40,40 1\n"), 3u);
  EXPECT_EQ(error_line(header + "pg0 0 30 x 0,40,40 1\n"), 2u);
  EXPECT_EQ(error_line(header + "pg0 0 30 95 0,40,40 1\n"), 2u);
  EXPECT_EQ(error_line("# only a comment\n" + good), 2u);
  EXPECT_EQ(error_line(header + good + "pg0 0 30 30 1\n"), 3u);

  std::istringstream in(header + good + "pg0 0 30 30 0,40,40 -1\n");
  try {
    parse_trial_log(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

// ---------------------------------------------------------------- kmeans

void check_nearest_assignment(std::span<const JointVector> points, const ClusterResult& r) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double assigned = squared_distance(points[i], r.centroids[r.assignment[i]]);
    for (std::size_t c = 0; c < r.centroids.size(); ++c) {
      EXPECT_LE(assigned, squared_distance(points[i], r.centroids[c])) << "point " << i << " centroid " << c;
    }
    inertia += assigned;
  }
  EXPECT_NEAR(r.inertia, inertia, 1e-6 * std::max(1.0, inertia));
}

TEST(KMeans, InvariantsOverRandomMatrix) {
  std::mt19937_64 gen(21);
  for (std::size_t n : {5u, 17u, 60u, 200u}) {
    const auto points = random_points(gen, n);
    for (std::size_t k = 1; k <= std::min<std::size_t>(n, 7); ++k) {
      for (std::uint64_t seed : {0u, 1u, 2u}) {
        const auto r = kmeans(points, k, seed);
        check_nearest_assignment(points, r);
        for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
          EXPECT_LE(r.inertia_history[i], r.inertia_history[i - 1] * (1 + 1e-12));
        }
        EXPECT_LE(r.inertia, r.inertia_history.front());
        EXPECT_NEAR(r.distortion, r.inertia / static_cast<double>(n), 1e-12);
        std::size_t total = 0;
        for (auto s : r.sizes) total += s;
        EXPECT_EQ(total, n);
      }
    }
  }
}

TEST(KMeans, SerialAndParallelAgree) {
  std::mt19937_64 gen(4);
  const auto points = random_points(gen, 500);
  for (std::size_t k : {1u, 3u, 8u}) {
    const auto serial = kmeans(points, k, 7, {300, Execution::Serial});
    const auto parallel = kmeans(points, k, 7, {300, Execution::Parallel});
    EXPECT_EQ(serial.assignment, parallel.assignment);
    EXPECT_EQ(serial.centroids, parallel.centroids);
    EXPECT_EQ(serial.inertia, parallel.inertia);
  }
}

TEST(KMeans, SeparatedGroups) {
  std::vector<JointVector> points = {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {50, 50, 50}, {52, 50, 50}, {50, 52, 50}};
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto r = kmeans(points, 2, seed);
    auto centroids = r.centroids;
    std::sort(centroids.begin(), centroids.end());
    EXPECT_NEAR(centroids[0][0], 2.0 / 3, 1e-12);
    EXPECT_NEAR(centroids[0][1], 2.0 / 3, 1e-12);
    EXPECT_NEAR(centroids[1][0], 50 + 2.0 / 3, 1e-12);
    // Scatter of each triangle about its mean: 2 * (4/9 + 4/9 + 16/9)... summed directly.
    double scatter = 0.0;
    for (const auto& p : points) scatter += squared_distance(p, p[0] < 10 ? centroids[0] : centroids[1]);
    EXPECT_NEAR(r.inertia, scatter, 1e-9);
  }
}

TEST(KMeans, OneClusterPerPointHasZeroInertia) {
  std::mt19937_64 gen(8);
  const auto points = random_points(gen, 12);
  EXPECT_EQ(kmeans(points, 12, 3).inertia, 0.0);
}

TEST(KMeans, RejectsBadK) {
  std::vector<JointVector> points = {{0, 0, 0}, {0, 0, 0}, {1, 1, 1}};
  EXPECT_EQ(count_distinct(points), 2u);
  EXPECT_THROW(kmeans(points, 0, 0), ValidationError);
  EXPECT_THROW(kmeans(points, 3, 0), ValidationError);
  EXPECT_NO_THROW(kmeans(points, 2, 0));
}

TEST(Elbow, SecondDifference) {
  EXPECT_EQ(elbow_select_k({{2, 100}, {3, 40}, {4, 35}, {5, 32}}), 3u);
  EXPECT_EQ(elbow_select_k({{2, 50}, {3, 40}, {4, 30}, {5, 20}, {6, 10}}), 2u);
  EXPECT_THROW(elbow_select_k({{2, 1}, {3, 0.5}}), ValidationError);
  EXPECT_THROW(elbow_select_k({{2, 3}, {3, 2}, {5, 1}}), ValidationError);
}

TEST(Elbow, PlantedKnees) {
  for (std::size_t knee = 2; knee <= 8; ++knee) {
    std::map<std::size_t, double> curve;
    for (std::size_t k = 1; k <= 10; ++k) {
      curve[k] = k <= knee ? 1000.0 - 100.0 * static_cast<double>(k)
                           : 1000.0 - 100.0 * static_cast<double>(knee) - 5.0 * static_cast<double>(k - knee);
    }
    EXPECT_EQ(elbow_select_k(curve), knee);
  }
}

TEST(Elbow, RecoversPlantedClusterCount) {
  // Groups sit on vertices of a regular tetrahedron so every merge costs the
  // same and the inertia curve is linear up to the true count, then flat.
  const std::vector<JointVector> vertices = {{0, 0, 0}, {60, 60, 0}, {60, 0, 60}, {0, 60, 60}};
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (std::size_t groups = 2; groups <= vertices.size(); ++groups) {
    std::vector<JointVector> points;
    for (std::size_t g = 0; g < groups; ++g) {
      for (int i = 0; i < 20; ++i) {
        const auto& v = vertices[g];
        points.push_back({v[0] + jitter(gen), v[1] + jitter(gen), v[2] + jitter(gen)});
      }
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto scan = cluster_with_elbow(points, 8, seed);
      EXPECT_EQ(scan.chosen_k, groups) << "seed " << seed;
      EXPECT_EQ(scan.inertia_by_k.size(), 8u);
    }
  }
}

// ---------------------------------------------------------------- hull and hand

TEST(Hull, Tetrahedron) {
  const std::vector<Vec3> tet = {{0, 0, 0}, {3, 0, 0}, {0, 4, 0}, {0, 0, 5}};
  EXPECT_NEAR(convex_hull_volume(tet), 3.0 * 4.0 * 5.0 / 6.0, 1e-9);
  // Any tetrahedron: |det(b - a, c - a, d - a)| / 6.
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> coord(-10, 10);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Vec3> p(4);
    for (auto& v : p) v = {coord(gen), coord(gen), coord(gen)};
    const Vec3 u{p[1][0] - p[0][0], p[1][1] - p[0][1], p[1][2] - p[0][2]};
    const Vec3 v{p[2][0] - p[0][0], p[2][1] - p[0][1], p[2][2] - p[0][2]};
    const Vec3 w{p[3][0] - p[0][0], p[3][1] - p[0][1], p[3][2] - p[0][2]};
    const double det = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) +
                       u[2] * (v[0] * w[1] - v[1] * w[0]);
    EXPECT_NEAR(convex_hull_volume(p), std::abs(det) / 6.0, 1e-9 * std::max(1.0, std::abs(det)));
  }
}

TEST(Hull, CubeWithInteriorAndFacePoints) {
  std::vector<Vec3> cube;
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y <= 1; ++y)
      for (int z = 0; z <= 1; ++z) cube.push_back({2.0 * x, 2.0 * y, 2.0 * z});
  EXPECT_NEAR(convex_hull_volume(cube), 8.0, 1e-9);
  cube.push_back({1, 1, 1});
  cube.push_back({1, 1, 2});
  cube.push_back({0, 1, 1});
  EXPECT_NEAR(convex_hull_volume(cube), 8.0, 1e-9);
}

TEST(Hull, DegenerateSetsHaveZeroVolume) {
  EXPECT_EQ(convex_hull_volume(std::vector<Vec3>{}), 0.0);
  EXPECT_EQ(convex_hull_volume(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}), 0.0);
  EXPECT_EQ(convex_hull_volume(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {3, 2, 0}}), 0.0);
  EXPECT_EQ(convex_hull_volume(std::vector<Vec3>{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}}), 0.0);
  EXPECT_EQ(convex_hull_volume(std::vector<Vec3>(5, Vec3{1, 2, 3})), 0.0);
}

TEST(Hull, MonotoneUnderInclusion) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> coord(-1, 1);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Vec3> points;
    double previous = 0.0;
    for (int i = 0; i < 16; ++i) {
      points.push_back({coord(gen), coord(gen), coord(gen)});
      const double v = convex_hull_volume(points);
      EXPECT_GE(v, previous - 1e-12);
      previous = v;
    }
    EXPECT_LE(previous, 8.0);
  }
}

TEST(HandModel, OpenHandHoldsMoreThanClosed) {
  for (double spread : {0.0, 60.0, 180.0, 300.0}) {
    const double open = in_grasp_volume({"open", spread, 30, 30}, {});
    const double closed = in_grasp_volume({"closed", spread, 90, 90}, {});
    EXPECT_GT(open, closed) << "spread " << spread;
  }
}

TEST(HandModel, PointSetShape) {
  const HandGeometry hand;
  EXPECT_EQ(hand_point_set({0, 30, 30}, hand).size(), static_cast<std::size_t>(hand.palm_points) + 6);
  HandGeometry bad;
  bad.palm_points = 2;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Mcpg, TiesGoToLowerIdAndKernelsAgree) {
  std::vector<PreGrasp> same = {{"pg2", 40, 45, 50}, {"pg1", 40, 45, 50}};
  const auto pick = select_mcpg(same);
  EXPECT_EQ(pick.pregrasp.id, "pg1");
  EXPECT_EQ(pick.volumes[0], pick.volumes[1]);
  EXPECT_THROW(select_mcpg(std::vector<PreGrasp>{}), ValidationError);

  const auto grid = generate_pregrasp_grid(60, 10);
  const auto serial = pregrasp_volumes_serial(grid, {});
  EXPECT_EQ(serial, pregrasp_volumes_omp(grid, {}));
  const auto best = select_mcpg(grid);
  EXPECT_EQ(best.volume, *std::max_element(serial.begin(), serial.end()));
}

// ---------------------------------------------------------------- selection pipelines

SelectionOptions seeded(std::uint64_t seed) {
  SelectionOptions options;
  options.seed = seed;
  return options;
}

SyntheticTrialSpec planted_spec(const OutcomeDistribution& planted) {
  SyntheticTrialSpec spec;
  spec.planted = PlantedRegion{120, 60, 90, 40, 70, planted};
  return spec;
}

TEST(Cppg, PlantedRegionRecovered) {
  const auto spec = planted_spec(OutcomeDistribution({.02, .04, .9, .04}));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto set = generate_synthetic_trials(spec, seed);
    const auto sel = select_cppg(set, 2, seeded(seed));
    EXPECT_EQ(sel.spread.spread_deg, 120.0);
    EXPECT_TRUE(spec.planted->contains(sel.pregrasp)) << sel.pregrasp.id;
    EXPECT_GE(sel.distribution[2], 0.6);
    EXPECT_EQ(sel.candidates, 49u);
    EXPECT_EQ(sel.survivors, 13u);
  }
}

TEST(Bepg, PlantedRegionRecoveredAndNearGridMaximum) {
  const OutcomeDistribution planted({0, 0, .1, .2, .4, .3});
  const auto spec = planted_spec(planted);
  double var = 0.0;
  for (std::size_t i = 0; i < planted.size(); ++i) var += planted[i] * std::pow(i - planted.mean(), 2);
  const double tolerance = 3.0 * std::sqrt(2.0 * var / static_cast<double>(spec.trials_per_pregrasp));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto set = generate_synthetic_trials(spec, seed);
    const auto sel = select_bepg(set, seeded(seed));
    EXPECT_TRUE(spec.planted->contains(sel.pregrasp)) << sel.pregrasp.id;
    double grid_best = 0.0;
    for (const auto& s : pregrasp_statistics(set)) grid_best = std::max(grid_best, compute_agp(s.ppg));
    EXPECT_GE(sel.agp, grid_best - tolerance);
  }
}

TEST(Bepg, SinglePreGraspDataset) {
  TrialSet set;
  set.pregrasps = {{"only", 10, 40, 50}};
  set.trials = trials_with({1, 2, 3}, "only");
  const auto sel = select_bepg(set, {});
  EXPECT_EQ(sel.pregrasp.id, "only");
  EXPECT_NEAR(sel.agp, 2.0, 1e-12);
}

TEST(Selection, DeterministicUnderSeed) {
  SyntheticTrialSpec flat;  // identical statistics everywhere
  flat.background = OutcomeDistribution({0, 0, 1});
  const auto set = generate_synthetic_trials(flat, 5);
  const auto a = select_cppg(set, 2, seeded(3));
  const auto b = select_cppg(set, 2, seeded(3));
  EXPECT_EQ(a.pregrasp, b.pregrasp);
  EXPECT_EQ(a.clusters.chosen.centroids, b.clusters.chosen.centroids);
  EXPECT_EQ(a.clusters.inertia_by_k, b.clusters.inertia_by_k);
  EXPECT_EQ(a.spread.spread_deg, 0.0);
}

TEST(Selection, EmptySurvivorsReportThreshold) {
  const auto set = generate_synthetic_trials(SyntheticTrialSpec{}, 1);
  SelectionOptions options;
  options.filter.min_score = 0.99;
  try {
    select_cppg(set, 2, options);
    FAIL() << "expected EmptySurvivorSet";
  } catch (const EmptySurvivorSet& e) {
    EXPECT_EQ(e.threshold(), 0.99);
  }
  EXPECT_THROW(select_cppg(set, 0, {}), ValidationError);
  EXPECT_THROW(select_cppg(set, 6, {}), ValidationError);
}

TEST(Selection, SeparateEvaluationSet) {
  const auto spec = planted_spec(OutcomeDistribution({.02, .04, .9, .04}));
  const auto train = generate_synthetic_trials(spec, 1);
  SyntheticTrialSpec flat;
  flat.background = OutcomeDistribution({0, 1});
  const auto evaluation = generate_synthetic_trials(flat, 2);
  SelectionOptions options;
  options.evaluation = &evaluation;
  const auto sel = select_cppg(train, 2, options);
  EXPECT_TRUE(spec.planted->contains(sel.pregrasp));
  expect_dist(sel.distribution, {0, 1});
}

TEST(EndGrasp, MajorityClusterChosen) {
  TrialSet set;
  set.pregrasps = {{"pg", 30, 40, 40}};
  for (int i = 0; i < 8; ++i) set.trials.push_back({"pg", {30 + 0.1 * i, 70, 72}, 2});
  for (int i = 0; i < 3; ++i) set.trials.push_back({"pg", {30, 50 + 0.1 * i, 90}, 2});
  set.trials.push_back({"pg", {30, 70, 71}, 1});
  set.trials.push_back({"pg", {30, 50, 89}, 3});
  const auto sel = select_end_grasp(set, "pg", 2, 4);
  EXPECT_EQ(sel.successful_trials, 11u);
  EXPECT_EQ(sel.clusters.chosen_k, 2u);
  const auto& end = sel.synergy.end_grasp;
  EXPECT_NEAR(end[0], 30.35, 1e-9);
  EXPECT_NEAR(end[1], 70.0, 1e-9);
  EXPECT_NEAR(end[2], 72.0, 1e-9);
  ASSERT_EQ(sel.srg.size(), 2u);
  expect_dist(sel.srg[sel.chosen_cluster], {0, 1.0 / 9, 8.0 / 9});
  expect_dist(sel.srg[1 - sel.chosen_cluster], {0, 0, .75, .25});
}

TEST(EndGrasp, SynergyEndpointsAndMonotonePath) {
  const PreGrasp p{"pg", 10, 30, 40};
  const JointVector end{12, 80, 65};
  const auto s = flexion_synergy(p, end, 20);
  ASSERT_EQ(s.trajectory.size(), 21u);
  EXPECT_EQ(s.trajectory.front(), p.joints());
  EXPECT_EQ(s.trajectory.back(), end);
  for (std::size_t i = 1; i < s.trajectory.size(); ++i) {
    for (std::size_t d = 0; d < kHandDof; ++d) {
      EXPECT_GE((s.trajectory[i][d] - s.trajectory[i - 1][d]) * (end[d] - p.joints()[d]), 0.0);
    }
  }
  EXPECT_THROW(flexion_synergy(p, end, 0), ValidationError);
}

TEST(EndGrasp, PlantedDominantModeRecovered) {
  SyntheticTrialSpec spec;
  spec.spread_step_deg = 360;
  spec.finger_step_deg = 60;
  spec.trials_per_pregrasp = 80;
  spec.background = OutcomeDistribution({.2, .3, .5});
  spec.end_modes = {{{0, 40, 10}, 0.7}, {{0, 5, 45}, 0.3}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto set = generate_synthetic_trials(spec, seed);
    const auto& p = set.pregrasps[2];
    const auto sel = select_end_grasp(set, p.id, 2, seed);
    const auto& end = sel.synergy.end_grasp;
    EXPECT_NEAR(end[1], p.finger_left_deg + 40, 1.0);
    EXPECT_NEAR(end[2], p.finger_right_deg + 10, 1.0);
  }
}

TEST(EndGrasp, Errors) {
  TrialSet set;
  set.pregrasps = {{"pg", 30, 40, 40}};
  set.trials = trials_with({0, 1}, "pg");
  EXPECT_THROW(select_end_grasp(set, "pg", 3, 0), ValidationError);
  EXPECT_THROW(select_end_grasp(set, "missing", 1, 0), ValidationError);
}

TEST(Synthetic, DeterministicInSeed) {
  SyntheticTrialSpec spec;
  std::ostringstream a;
  std::ostringstream b;
  write_trial_log(a, generate_synthetic_trials(spec, 9));
  write_trial_log(b, generate_synthetic_trials(spec, 9));
  EXPECT_EQ(a.str(), b.str());
}

}  // namespace
}  // namespace mogt::grasp
