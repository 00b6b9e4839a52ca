#include "wristkit/demolog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace wristkit {

namespace {

constexpr const char* kHeader =
    "episode_id,t,q0,q1,q2,q3,q4,q5,x,y,z,qw,qx,qy,qz,gripper,reset_count,success,task,robot";

std::vector<std::string> splitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

void validateEpisode(const DemoEpisode& ep) {
  if (ep.samples.size() < 2) {
    throw Error(ErrorCode::ParseError,
                "episode '" + ep.id + "' needs at least 2 samples");
  }
}

}  // namespace

std::vector<DemoEpisode> loadDataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");

  std::vector<DemoEpisode> episodes;
  std::map<std::string, std::size_t> by_id;  // id -> index in `episodes`
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kHeader) {
        throw Error(ErrorCode::ParseError,
                    "line 1: expected header '" + std::string(kHeader) + "'");
      }
      saw_header = true;
      continue;
    }
    const auto cells = splitCsv(line);
    if (cells.size() != 20) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected 20 columns, got " +
                      std::to_string(cells.size()));
    }
    auto num = [&](int idx) {
      try {
        return std::stod(cells[idx]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                               ": bad number '" + cells[idx] + "'");
      }
    };

    DemoSample sample;
    sample.t = num(1);
    sample.q.resize(6);
    for (int i = 0; i < 6; ++i) sample.q[i] = num(2 + i);
    sample.ee.translation = {num(8), num(9), num(10)};
    Eigen::Quaterniond quat(num(11), num(12), num(13), num(14));
    if (quat.norm() < 1e-12) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": zero quaternion");
    }
    quat.normalize();
    sample.ee.rotation = Rotation::fromMatrixUnchecked(quat.toRotationMatrix());
    sample.gripper = num(15);

    const std::string& id = cells[0];
    const std::string& success = cells[17];
    if (success != "0" && success != "1") {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": success must be 0 or 1");
    }

    auto it = by_id.find(id);
    if (it == by_id.end()) {
      DemoEpisode ep;
      ep.id = id;
      ep.reset_count = static_cast<int>(num(16));
      ep.success = success == "1";
      ep.task = cells[18];
      ep.robot = cells[19];
      by_id.emplace(id, episodes.size());
      episodes.push_back(std::move(ep));
      it = by_id.find(id);
    }
    DemoEpisode& ep = episodes[it->second];
    if (!ep.samples.empty() && sample.t <= ep.samples.back().t) {
      throw Error(ErrorCode::MonotonicityViolation,
                  "line " + std::to_string(line_no) + ": timestamp " +
                      std::to_string(sample.t) + " does not increase within episode '" +
                      id + "'");
    }
    ep.samples.push_back(std::move(sample));
  }
  for (const auto& ep : episodes) validateEpisode(ep);
  return episodes;
}

TrajectoryMetrics trajectoryLength(const DemoEpisode& episode) {
  TrajectoryMetrics m;
  for (std::size_t i = 1; i < episode.samples.size(); ++i) {
    const auto& a = episode.samples[i - 1];
    const auto& b = episode.samples[i];
    m.ee_path_length += (b.ee.translation - a.ee.translation).norm();
    m.joint_path_length += (b.q - a.q).norm();
  }
  if (!episode.samples.empty()) {
    m.duration = episode.samples.back().t - episode.samples.front().t;
  }
  return m;
}

OperatorStats operatorStats(const std::vector<DemoEpisode>& dataset, const std::string& task,
                            const std::string& robot) {
  OperatorStats stats;
  double time_sum = 0.0, reset_sum = 0.0;
  for (const auto& ep : dataset) {
    if (ep.task != task || ep.robot != robot) continue;
    time_sum += trajectoryLength(ep).duration;
    reset_sum += ep.reset_count;
    ++stats.episodes;
  }
  if (stats.episodes == 0) {
    throw Error(ErrorCode::EmptySelection,
                "no episodes match task '" + task + "' on robot '" + robot + "'");
  }
  stats.mean_operator_time = time_sum / stats.episodes;
  stats.mean_resets = reset_sum / stats.episodes;
  return stats;
}

SummaryStats summarize(const std::vector<double>& values, const std::string& units) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptySelection, "cannot summarize an empty sample");
  }
  SummaryStats s;
  s.n = static_cast<int>(values.size());
  s.units = units;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.standard_error = std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

SpeedupReport speedupReport(const SummaryStats& base, const SummaryStats& ours) {
  if (!(base.mean > 0.0) || !(ours.mean > 0.0)) {
    throw Error(ErrorCode::NonPositiveInput, "speedup needs positive means");
  }
  SpeedupReport report;
  report.ratio = base.mean / ours.mean;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << report.ratio << "x faster (" << base.mean << " " << base.units << " vs "
     << ours.mean << " " << ours.units << ")";
  report.formatted = os.str();
  return report;
}

Json datasetStatsToJson(const std::vector<DemoEpisode>& dataset) {
  // Group by (task, robot) preserving first-appearance order.
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& ep : dataset) {
    const auto key = std::make_pair(ep.task, ep.robot);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["episodes"] = static_cast<int>(dataset.size());
  Json groups = Json::array();
  for (const auto& [task, robot] : keys) {
    std::vector<double> durations, ee_lengths, joint_lengths;
    for (const auto& ep : dataset) {
      if (ep.task != task || ep.robot != robot) continue;
      const TrajectoryMetrics m = trajectoryLength(ep);
      durations.push_back(m.duration);
      ee_lengths.push_back(m.ee_path_length);
      joint_lengths.push_back(m.joint_path_length);
    }
    const OperatorStats op = operatorStats(dataset, task, robot);
    auto stats = [](const SummaryStats& s) {
      return Json{{"n", s.n},          {"mean", s.mean}, {"standard_error", s.standard_error},
                  {"min", s.min},      {"max", s.max},   {"units", s.units}};
    };
    Json g;
    g["task"] = task;
    g["robot"] = robot;
    g["episodes"] = op.episodes;
    g["mean_operator_time_s"] = op.mean_operator_time;
    g["mean_resets"] = op.mean_resets;
    g["duration_s"] = stats(summarize(durations, "s"));
    g["ee_path_length_m"] = stats(summarize(ee_lengths, "m"));
    g["joint_path_length_rad"] = stats(summarize(joint_lengths, "rad"));
    groups.push_back(g);
  }
  j["groups"] = groups;
  return j;
}

}  // namespace wristkit
