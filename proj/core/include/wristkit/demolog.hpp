#pragma once

#include <string>
#include <vector>

#include "wristkit/geom.hpp"
#include "wristkit/json_io.hpp"
#include "wristkit/kinematics.hpp"

namespace wristkit {

struct DemoSample {
  double t = 0.0;  // s
  JointConfig q;   // rad
  Pose ee;
  double gripper = 0.0;
};

struct DemoEpisode {
  std::string id;
  std::vector<DemoSample> samples;  // timestamps strictly increasing, >= 2
  int reset_count = 0;
  bool success = false;
  std::string task;
  std::string robot;
};

/// Flat-CSV demonstration log. Header (required):
///   episode_id,t,q0,q1,q2,q3,q4,q5,x,y,z,qw,qx,qy,qz,gripper,reset_count,success,task,robot
/// Units: s, rad, m. Malformed rows are rejected with their line number
/// (ParseError); non-increasing timestamps raise MonotonicityViolation.
std::vector<DemoEpisode> loadDataset(const std::string& path);

struct TrajectoryMetrics {
  double ee_path_length = 0.0;     // m, translation polyline
  double joint_path_length = 0.0;  // rad, summed L2 steps
  double duration = 0.0;           // s
};

TrajectoryMetrics trajectoryLength(const DemoEpisode& episode);

struct OperatorStats {
  double mean_operator_time = 0.0;  // s
  double mean_resets = 0.0;
  int episodes = 0;
};

/// Means over episodes matching (task, robot). Throws EmptySelection.
OperatorStats operatorStats(const std::vector<DemoEpisode>& dataset, const std::string& task,
                            const std::string& robot);

struct SummaryStats {
  int n = 0;
  double mean = 0.0;
  double standard_error = 0.0;  // s / sqrt(n), sample stddev
  double min = 0.0;
  double max = 0.0;
  std::string units;
};

/// Throws EmptySelection for an empty sample.
SummaryStats summarize(const std::vector<double>& values, const std::string& units);

struct SpeedupReport {
  double ratio = 1.0;  // mean_base / mean_ours
  std::string formatted;
};

/// Completion-time speedup of `ours` relative to `base`; means must be > 0.
SpeedupReport speedupReport(const SummaryStats& base, const SummaryStats& ours);

Json datasetStatsToJson(const std::vector<DemoEpisode>& dataset);

}  // namespace wristkit
