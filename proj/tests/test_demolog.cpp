#include "doctest.h"
#include "models.hpp"
#include "oracles.hpp"
#include "wristkit/demolog.hpp"

#include <cstdio>
#include <fstream>
#include <random>

using namespace wristkit;

namespace {

constexpr const char* kHeader =
    "episode_id,t,q0,q1,q2,q3,q4,q5,x,y,z,qw,qx,qy,qz,gripper,reset_count,success,task,robot";

std::string sampleRow(const std::string& id, double t, double x, double y, double z,
                      int resets = 0, const std::string& task = "demo",
                      const std::string& robot = "arm") {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%g,0,0,0,0,0,0,%g,%g,%g,1,0,0,0,0,%d,1,%s,%s",
                id.c_str(), t, x, y, z, resets, task.c_str(), robot.c_str());
  return buf;
}

std::string writeTemp(const std::vector<std::string>& lines) {
  const std::string path = "demolog_test.csv";
  std::ofstream out(path);
  for (const auto& l : lines) out << l << "\n";
  return path;
}

}  // namespace

TEST_CASE("loadDataset: empty file and fixtures") {
  const std::string empty = writeTemp({});
  CHECK(loadDataset(empty).empty());

  const std::string header_only = writeTemp({kHeader});
  CHECK(loadDataset(header_only).empty());

  const auto episodes = loadDataset(testmodels::dataPath("fixtures/demos_sample.csv"));
  REQUIRE(episodes.size() == 2);
  CHECK(episodes[0].id == "serial-fridge-01");
  CHECK(episodes[1].id == "pkm-fridge-01");
  CHECK(episodes[0].samples.size() == 4);
  CHECK(episodes[0].reset_count == 2);
  CHECK(episodes[0].success);
  std::remove("demolog_test.csv");
}

TEST_CASE("loadDataset rejects malformed input with line numbers") {
  const std::string bad_ts = writeTemp({
      kHeader,
      sampleRow("e1", 0.0, 0, 0, 0),
      sampleRow("e1", 1.0, 0.1, 0, 0),
      sampleRow("e1", 0.5, 0.2, 0, 0),  // line 4: decreasing timestamp
  });
  try {
    loadDataset(bad_ts);
    FAIL("expected MonotonicityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MonotonicityViolation);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }

  const std::string bad_cols = writeTemp({kHeader, "e1,0.0,only,a,few"});
  try {
    loadDataset(bad_cols);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  const std::string single = writeTemp({kHeader, sampleRow("lonely", 0.0, 0, 0, 0)});
  CHECK_THROWS_AS(loadDataset(single), Error);
  std::remove("demolog_test.csv");
}

TEST_CASE("trajectory length: stationary, two-sample, helix oracle") {
  DemoEpisode still;
  still.id = "still";
  for (double t : {0.0, 1.0, 2.0}) {
    DemoSample s;
    s.t = t;
    s.q = JointConfig::Zero(6);
    s.ee.translation = {0.3, 0.0, 0.2};
    still.samples.push_back(s);
  }
  const TrajectoryMetrics still_m = trajectoryLength(still);
  CHECK(still_m.ee_path_length == 0.0);
  CHECK(still_m.duration == doctest::Approx(2.0));

  DemoEpisode hop = still;
  hop.samples.resize(2);
  hop.samples[1].t = 2.0;
  hop.samples[1].ee.translation = {0.4, 0.0, 0.2};
  const TrajectoryMetrics hop_m = trajectoryLength(hop);
  CHECK(hop_m.ee_path_length == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(hop_m.duration == doctest::Approx(2.0));

  // 100-sample helix vs the closed-form arc length L = t*sqrt(r^2 w^2 + c^2).
  const double r = 0.2, w = 2.0, c = 0.05, total_t = 3.0;
  DemoEpisode helix;
  helix.id = "helix";
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const double t = total_t * i / (n - 1.0);
    DemoSample s;
    s.t = t;
    s.q = JointConfig::Zero(6);
    s.ee.translation = {r * std::cos(w * t), r * std::sin(w * t), c * t};
    helix.samples.push_back(s);
  }
  const double analytic = total_t * std::sqrt(r * r * w * w + c * c);
  const TrajectoryMetrics helix_m = trajectoryLength(helix);
  CHECK(helix_m.ee_path_length == doctest::Approx(analytic).epsilon(0.01));

  // Joint path length: L2 steps summed.
  DemoEpisode joints = still;
  joints.samples[1].q = (Eigen::VectorXd(6) << 0.3, 0, 0.4, 0, 0, 0).finished();
  joints.samples[2].q = joints.samples[1].q;
  CHECK(trajectoryLength(joints).joint_path_length == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("path length is invariant under a rigid transform of all poses") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  DemoEpisode ep;
  ep.id = "random";
  for (int i = 0; i < 50; ++i) {
    DemoSample s;
    s.t = i * 0.1;
    s.q = JointConfig::Zero(6);
    s.ee.translation = {uni(rng), uni(rng), uni(rng)};
    ep.samples.push_back(s);
  }
  Pose xform;
  xform.rotation = oracles::randomRotation(rng);
  xform.translation = {1.0, -2.0, 0.5};
  DemoEpisode moved = ep;
  for (auto& s : moved.samples) {
    s.ee.translation = xform * s.ee.translation;
    s.ee.rotation = xform.rotation * s.ee.rotation;
  }
  CHECK(std::abs(trajectoryLength(moved).ee_path_length -
                 trajectoryLength(ep).ee_path_length) < 1e-9);
}

TEST_CASE("operator stats: means over the matching selection") {
  const std::string path = writeTemp({
      kHeader,
      sampleRow("a", 0.0, 0, 0, 0, 1, "fridge", "arm"),
      sampleRow("a", 39.5, 0.1, 0, 0, 1, "fridge", "arm"),
      sampleRow("b", 0.0, 0, 0, 0, 1, "fridge", "arm"),
      sampleRow("b", 10.0, 0.1, 0, 0, 1, "fridge", "arm"),
      sampleRow("c", 0.0, 0, 0, 0, 1, "fridge", "arm"),
      sampleRow("c", 20.0, 0.1, 0, 0, 1, "fridge", "arm"),
      sampleRow("d", 0.0, 0, 0, 0, 0, "wipe", "arm"),
      sampleRow("d", 5.0, 0.1, 0, 0, 0, "wipe", "arm"),
  });
  const auto dataset = loadDataset(path);

  // Single 39.5 s episode.
  const std::string single = writeTemp({
      kHeader,
      sampleRow("only", 0.0, 0, 0, 0, 1, "fridge", "arm"),
      sampleRow("only", 39.5, 0.1, 0, 0, 1, "fridge", "arm"),
  });
  const OperatorStats one = operatorStats(loadDataset(single), "fridge", "arm");
  CHECK(one.mean_operator_time == doctest::Approx(39.5));

  const OperatorStats stats = operatorStats(dataset, "fridge", "arm");
  CHECK(stats.episodes == 3);
  CHECK(stats.mean_operator_time == doctest::Approx((39.5 + 10.0 + 20.0) / 3.0));
  CHECK(stats.mean_resets == doctest::Approx(1.0));

  try {
    operatorStats(dataset, "fridge", "unknown-robot");
    FAIL("expected EmptySelection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySelection);
  }
  std::remove("demolog_test.csv");
}

TEST_CASE("episodes {10 s, 20 s} average to 15 s") {
  const std::string path = writeTemp({
      kHeader,
      sampleRow("a", 0.0, 0, 0, 0, 0, "t", "r"),
      sampleRow("a", 10.0, 0.1, 0, 0, 0, "t", "r"),
      sampleRow("b", 5.0, 0, 0, 0, 0, "t", "r"),
      sampleRow("b", 25.0, 0.1, 0, 0, 0, "t", "r"),
  });
  const OperatorStats stats = operatorStats(loadDataset(path), "t", "r");
  CHECK(stats.mean_operator_time == doctest::Approx(15.0));
  std::remove("demolog_test.csv");
}

TEST_CASE("summary statistics match a brute-force two-pass oracle") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uni(1.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values;
    const int n = 2 + trial % 40;
    for (int i = 0; i < n; ++i) values.push_back(uni(rng));
    const SummaryStats s = summarize(values, "s");

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double varsum = 0.0;
    for (double v : values) varsum += (v - mean) * (v - mean);
    const double sem = std::sqrt(varsum / (n - 1)) / std::sqrt(static_cast<double>(n));
    CHECK(s.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(s.standard_error == doctest::Approx(sem).epsilon(1e-12));
    CHECK(s.min <= s.mean);
    CHECK(s.mean <= s.max);
  }
  CHECK_THROWS_AS(summarize({}, "s"), Error);
}

TEST_CASE("speedup report reproduces the completion-time ratios") {
  SummaryStats base, ours;
  base.units = ours.units = "s";

  base.mean = 91.0;
  ours.mean = 28.1;
  const SpeedupReport a = speedupReport(base, ours);
  CHECK(a.ratio == doctest::Approx(3.24).epsilon(0.0035));
  CHECK(a.formatted.find("3.24x") != std::string::npos);

  base.mean = 21.2;
  ours.mean = 4.3;
  const SpeedupReport b = speedupReport(base, ours);
  CHECK(b.ratio == doctest::Approx(4.93).epsilon(0.002));
  // Matches the rounded published figure within table-rounding slack.
  CHECK(std::abs(b.ratio - 4.92) <= 0.05);

  base.mean = ours.mean = 10.0;
  CHECK(speedupReport(base, ours).ratio == 1.0);

  SummaryStats zero;
  zero.mean = 0.0;
  CHECK_THROWS_AS(speedupReport(zero, ours), Error);
}

TEST_CASE("dataset stats JSON groups by task and robot") {
  const auto dataset = loadDataset(testmodels::dataPath("fixtures/demos_sample.csv"));
  const Json j = datasetStatsToJson(dataset);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("episodes") == 2);
  REQUIRE(j.at("groups").size() == 2);
  CHECK(j.at("groups")[0].at("task") == "fridge");
  CHECK(j.at("groups")[0].at("mean_operator_time_s").get<double>() == doctest::Approx(63.3));
  CHECK(j.at("groups")[1].at("mean_operator_time_s").get<double>() == doctest::Approx(39.5));
}
