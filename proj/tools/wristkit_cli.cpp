// wristkit command-line interface: every toolkit operation behind one
// executable with file-based inputs and machine-readable JSON reports.
//
// Exit codes: 0 success, 1 domain error (single-line JSON on stderr),
// 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wristkit/actuator.hpp"
#include "wristkit/demolog.hpp"
#include "wristkit/diffik.hpp"
#include "wristkit/robot_io.hpp"
#include "wristkit/workspace.hpp"

namespace {

using wristkit::Json;

void emitReport(const Json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      throw wristkit::Error(wristkit::ErrorCode::IoError, "cannot write '" + out_path + "'");
    }
    out << text;
  }
  std::cout << text;
}

Eigen::VectorXd parseNumberList(const std::string& csv, int expected) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      vals.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw wristkit::Error(wristkit::ErrorCode::ParseError, "bad number '" + cell + "'");
    }
  }
  if (expected >= 0 && static_cast<int>(vals.size()) != expected) {
    throw wristkit::Error(wristkit::ErrorCode::ParseError,
                          "expected " + std::to_string(expected) + " comma-separated values");
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

wristkit::GridSpec parseGrid(const std::string& text) {
  wristkit::GridSpec grid;
  if (std::sscanf(text.c_str(), "%dx%dx%d", &grid.nx, &grid.ny, &grid.nz) != 3) {
    throw wristkit::Error(wristkit::ErrorCode::ParseError,
                          "grid must look like 20x20x20, got '" + text + "'");
  }
  grid.validate();
  return grid;
}

struct FkOptions {
  std::string robot;
  std::string q;
  std::string out;
};

int runFk(const FkOptions& opt) {
  const wristkit::RobotModel model = wristkit::loadRobotModel(opt.robot);
  const Eigen::VectorXd q = parseNumberList(opt.q, model.dof());
  const wristkit::FkResult fk = wristkit::forwardKinematics(model, q);

  Json report;
  report["schema_version"] = wristkit::kSchemaVersion;
  report["robot"] = model.name;
  report["q"] = std::vector<double>(q.data(), q.data() + q.size());
  report["ee"] = wristkit::poseToJson(fk.ee);
  Json frames = Json::array();
  const auto names = model.frameNames();
  for (std::size_t i = 0; i < names.size(); ++i) {
    Json f;
    f["name"] = names[i];
    f["pose"] = wristkit::poseToJson(fk.frames[i]);
    frames.push_back(f);
  }
  report["frames"] = frames;
  emitReport(report, opt.out);
  return 0;
}

struct IkOptions {
  std::string robot;
  std::string pos;
  std::string quat{"1,0,0,0"};
  std::string target_json;
  std::string seed_config;
  std::string trajectory;
  double duration = 0.0;
  double step_period = 0.1;
  int max_iters = 100;
  bool position_only = false;
  std::string out;
};

Json ikResultToJson(const wristkit::IKResult& res) {
  Json j;
  j["schema_version"] = wristkit::kSchemaVersion;
  j["converged"] = res.converged;
  j["iterations"] = res.iterations;
  j["position_residual_m"] = res.position_residual;
  j["orientation_residual_rad"] = res.orientation_residual;
  j["failure_reason"] = res.failure_reason;
  j["solution"] =
      std::vector<double>(res.solution.data(), res.solution.data() + res.solution.size());
  return j;
}

int runIk(const IkOptions& opt) {
  const wristkit::RobotModel model = wristkit::loadRobotModel(opt.robot);
  wristkit::JointConfig seed = model.midConfig();
  if (!opt.seed_config.empty()) seed = parseNumberList(opt.seed_config, model.dof());

  wristkit::DiffIKConfig cfg;
  cfg.control_period = opt.step_period;
  cfg.max_iterations = opt.max_iters;
  if (opt.position_only) cfg = cfg.positionOnlyVariant();

  if (!opt.trajectory.empty()) {
    // Stream mode: 1 kHz setpoints toward a timed waypoint list.
    const auto waypoints = wristkit::loadTrajectoryCsv(opt.trajectory);
    wristkit::DiffIKConfig stream_cfg = cfg;
    stream_cfg.control_period = 1e-3;
    const double duration =
        opt.duration > 0.0 ? opt.duration : waypoints.back().t + 0.25;
    const auto setpoints =
        wristkit::streamSetpoints(model, seed, waypoints, stream_cfg, duration);

    if (opt.out.empty()) {
      throw wristkit::Error(wristkit::ErrorCode::IoError,
                            "--trajectory mode requires --out for the setpoint CSV");
    }
    std::ofstream out(opt.out);
    if (!out) {
      throw wristkit::Error(wristkit::ErrorCode::IoError, "cannot write '" + opt.out + "'");
    }
    out << "t";
    for (int i = 0; i < model.dof(); ++i) out << ",q" << i;
    out << "\n";
    out.setf(std::ios::fixed);
    out.precision(9);
    for (const auto& sp : setpoints) {
      out << sp.t;
      for (int i = 0; i < model.dof(); ++i) out << "," << sp.q[i];
      out << "\n";
    }

    const wristkit::Pose final_pose =
        wristkit::forwardKinematics(model, setpoints.back().q).ee;
    Json report;
    report["schema_version"] = wristkit::kSchemaVersion;
    report["setpoints"] = static_cast<int>(setpoints.size());
    report["rate_hz"] = 1.0 / stream_cfg.control_period;
    report["final_position_error_m"] =
        (final_pose.translation - waypoints.back().pose.translation).norm();
    std::cout << report.dump(2) << "\n";
    return 0;
  }

  wristkit::Pose target;
  if (!opt.target_json.empty()) {
    target = wristkit::poseFromJson(wristkit::loadJsonFile(opt.target_json));
  } else if (!opt.pos.empty()) {
    const Eigen::VectorXd p = parseNumberList(opt.pos, 3);
    const Eigen::VectorXd wxyz = parseNumberList(opt.quat, 4);
    Eigen::Quaterniond quat(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
    if (quat.norm() < 1e-12) {
      throw wristkit::Error(wristkit::ErrorCode::ParseError, "zero quaternion");
    }
    quat.normalize();
    target.translation = p.head<3>();
    target.rotation = wristkit::Rotation::fromMatrixUnchecked(quat.toRotationMatrix());
  } else {
    throw wristkit::Error(wristkit::ErrorCode::ParseError,
                          "ik needs --pos, --target-json, or --trajectory");
  }

  const wristkit::IKResult res = wristkit::solvePoseIk(model, seed, target, cfg);
  emitReport(ikResultToJson(res), opt.out);
  return res.converged ? 0 : 1;
}

struct WorkspaceOptions {
  std::string robot;
  std::string scene;
  std::string grid{"20x20x20"};
  int threads = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string heatmap;
};

int runWorkspace(const WorkspaceOptions& opt) {
  const wristkit::RobotModel model = wristkit::loadRobotModel(opt.robot);
  const wristkit::Scene scene = wristkit::loadScene(opt.scene);
  const wristkit::GridSpec grid = parseGrid(opt.grid);
  wristkit::ReachabilityConfig cfg;
  cfg.seed = opt.seed;
  const wristkit::ReachabilityResult result =
      wristkit::reachabilityGrid(model, scene, grid, cfg, opt.threads);
  if (!opt.heatmap.empty()) wristkit::writeHeatmapSlices(result, opt.heatmap);
  emitReport(wristkit::reachabilityToJson(result), opt.out);
  return 0;
}

struct CompareOptions {
  std::string a;
  std::string b;
  std::string out;
};

int runCompare(const CompareOptions& opt) {
  const wristkit::ReachabilityResult a =
      wristkit::reachabilityFromJson(wristkit::loadJsonFile(opt.a));
  const wristkit::ReachabilityResult b =
      wristkit::reachabilityFromJson(wristkit::loadJsonFile(opt.b));
  const wristkit::WorkspaceComparison cmp = wristkit::compareWorkspaces(a, b);
  emitReport(wristkit::comparisonToJson(cmp, a, b), opt.out);
  return 0;
}

struct ActuatorOptions {
  std::string spec;
  std::string out;
};

int runActuatorCheck(const ActuatorOptions& opt) {
  const wristkit::ActuatorSpec spec = wristkit::loadActuatorSpec(opt.spec);
  emitReport(wristkit::actuatorReport(spec), opt.out);
  return 0;
}

struct ReqsOptions {
  std::string csv;
  std::string out;
};

int runReqs(const ReqsOptions& opt) {
  const auto rows = wristkit::loadRequirementsCsv(opt.csv);
  const wristkit::RequirementReport report = wristkit::evaluateRequirements(rows);
  emitReport(wristkit::requirementReportToJson(report), opt.out);
  return 0;
}

struct DemologOptions {
  std::string csv;
  std::string task;
  std::string robot;
  std::string out;
  std::string csv_out;
};

int runDemologStats(const DemologOptions& opt) {
  const auto dataset = wristkit::loadDataset(opt.csv);
  Json report = wristkit::datasetStatsToJson(dataset);
  if (!opt.task.empty() && !opt.robot.empty()) {
    const wristkit::OperatorStats stats =
        wristkit::operatorStats(dataset, opt.task, opt.robot);
    report["selection"] = {{"task", opt.task},
                           {"robot", opt.robot},
                           {"episodes", stats.episodes},
                           {"mean_operator_time_s", stats.mean_operator_time},
                           {"mean_resets", stats.mean_resets}};
  }
  if (!opt.csv_out.empty()) {
    std::ofstream out(opt.csv_out);
    if (!out) {
      throw wristkit::Error(wristkit::ErrorCode::IoError, "cannot write '" + opt.csv_out + "'");
    }
    out << "task,robot,episodes,mean_operator_time_s,mean_resets,mean_ee_path_m,"
           "mean_joint_path_rad\n";
    for (const auto& g : report["groups"]) {
      out << g["task"].get<std::string>() << "," << g["robot"].get<std::string>() << ","
          << g["episodes"] << "," << g["mean_operator_time_s"] << "," << g["mean_resets"]
          << "," << g["ee_path_length_m"]["mean"] << "," << g["joint_path_length_rad"]["mean"]
          << "\n";
    }
  }
  emitReport(report, opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinematics and workspace analysis toolkit for a decoupled parallel wrist"};
  app.require_subcommand(1);

  FkOptions fk;
  auto* fk_cmd = app.add_subcommand("fk", "Forward kinematics of a robot description");
  fk_cmd->add_option("--robot", fk.robot, "robot description JSON")->required();
  fk_cmd->add_option("--q", fk.q, "comma-separated joint angles, rad")->required();
  fk_cmd->add_option("--out", fk.out, "report path");

  IkOptions ik;
  auto* ik_cmd = app.add_subcommand("ik", "Differential inverse kinematics");
  ik_cmd->add_option("--robot", ik.robot, "robot description JSON")->required();
  ik_cmd->add_option("--pos", ik.pos, "target position x,y,z (m)");
  ik_cmd->add_option("--quat", ik.quat, "target quaternion w,x,y,z");
  ik_cmd->add_option("--target-json", ik.target_json, "target pose JSON file");
  ik_cmd->add_option("--seed-config", ik.seed_config, "seed joint angles, rad");
  ik_cmd->add_option("--trajectory", ik.trajectory, "waypoint CSV (t,x,y,z,qw,qx,qy,qz)");
  ik_cmd->add_option("--duration", ik.duration, "stream duration, s");
  ik_cmd->add_option("--step-period", ik.step_period, "IK step period, s");
  ik_cmd->add_option("--max-iters", ik.max_iters, "iteration cap");
  ik_cmd->add_flag("--position-only", ik.position_only, "zero the angular task weights");
  ik_cmd->add_option("--out", ik.out, "report path (setpoint CSV in trajectory mode)");

  WorkspaceOptions ws;
  auto* ws_cmd = app.add_subcommand("workspace", "Gridded reachability analysis");
  ws_cmd->add_option("--robot", ws.robot, "robot description JSON")->required();
  ws_cmd->add_option("--scene", ws.scene, "scene JSON")->required();
  ws_cmd->add_option("--grid", ws.grid, "grid resolution NxNxN (default 20x20x20)");
  ws_cmd->add_option("--threads", ws.threads, "worker threads (0 = hardware)");
  ws_cmd->add_option("--seed", ws.seed, "IK seed-dither randomization seed");
  ws_cmd->add_option("--out", ws.out, "report path");
  ws_cmd->add_option("--heatmap", ws.heatmap, "per-z-slice PPM path prefix");

  CompareOptions cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare two reachability reports");
  cmp_cmd->add_option("a", cmp.a, "baseline reachability report")->required();
  cmp_cmd->add_option("b", cmp.b, "candidate reachability report")->required();
  cmp_cmd->add_option("--out", cmp.out, "report path");

  ActuatorOptions act;
  auto* act_cmd = app.add_subcommand("actuator-check", "Actuator sizing report");
  act_cmd->add_option("--spec", act.spec, "actuator spec JSON")->required();
  act_cmd->add_option("--out", act.out, "report path");

  ReqsOptions reqs;
  auto* reqs_cmd = app.add_subcommand("reqs", "Evaluate a functional-requirements CSV");
  reqs_cmd->add_option("--csv", reqs.csv, "requirements CSV")->required();
  reqs_cmd->add_option("--out", reqs.out, "report path");

  DemologOptions demo;
  auto* demo_cmd = app.add_subcommand("demolog-stats", "Demonstration log metrics");
  demo_cmd->add_option("--csv", demo.csv, "episode CSV")->required();
  demo_cmd->add_option("--task", demo.task, "filter: task label");
  demo_cmd->add_option("--robot", demo.robot, "filter: robot label");
  demo_cmd->add_option("--out", demo.out, "report path");
  demo_cmd->add_option("--csv-out", demo.csv_out, "tabular report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fk_cmd->parsed()) return runFk(fk);
    if (ik_cmd->parsed()) return runIk(ik);
    if (ws_cmd->parsed()) return runWorkspace(ws);
    if (cmp_cmd->parsed()) return runCompare(cmp);
    if (act_cmd->parsed()) return runActuatorCheck(act);
    if (reqs_cmd->parsed()) return runReqs(reqs);
    if (demo_cmd->parsed()) return runDemologStats(demo);
  } catch (const wristkit::Error& e) {
    Json err;
    err["error"] = wristkit::errorCodeName(e.code());
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    Json err;
    err["error"] = "Unhandled";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 2;
}
