#include "wristkit/diffik.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wristkit {

Eigen::Matrix<double, 6, 1> poseErrorTwist(const Pose& current, const Pose& target) {
  Eigen::Matrix<double, 6, 1> err;
  err.head<3>() = target.translation - current.translation;
  err.tail<3>() = (target.rotation * current.rotation.inverse()).axisAngle();
  return err;
}

QPSpec buildDiffIkQp(const RobotModel& model, const JointConfig& q, const Pose& target,
                     const DiffIKConfig& cfg) {
  const int n = model.dof();
  if (q.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "joint config does not match model DOF");
  }
  const Eigen::MatrixXd jac = geometricJacobian(model, q);
  const Pose current = forwardKinematics(model, q).ee;
  const Eigen::Matrix<double, 6, 1> v_des = poseErrorTwist(current, target) / cfg.control_period;

  const Eigen::Matrix<double, 6, 6> w = cfg.task_weights.asDiagonal();
  QPSpec spec;
  spec.hessian = jac.transpose() * w * jac +
                 cfg.damping * Eigen::MatrixXd::Identity(n, n);
  spec.gradient = -jac.transpose() * (w * v_des);

  const Eigen::VectorXd lo_pos = model.lowerLimits();
  const Eigen::VectorXd hi_pos = model.upperLimits();
  const Eigen::VectorXd v_lim = model.velocityLimits();
  spec.lower.resize(n);
  spec.upper.resize(n);
  for (int i = 0; i < n; ++i) {
    // Velocity damper: a full step may consume at most `limit_horizon` of the
    // remaining distance to the position limit.
    const double damper_hi = cfg.limit_horizon * (hi_pos[i] - q[i]) / cfg.control_period;
    const double damper_lo = cfg.limit_horizon * (lo_pos[i] - q[i]) / cfg.control_period;
    spec.upper[i] = std::min(v_lim[i], std::max(0.0, damper_hi));
    spec.lower[i] = std::max(-v_lim[i], std::min(0.0, damper_lo));
  }
  return spec;
}

JointConfig integrateStep(const RobotModel& model, const JointConfig& q,
                          const Eigen::VectorXd& qdot, double dt) {
  if (q.size() != qdot.size()) {
    throw Error(ErrorCode::DimensionMismatch, "q and qdot sizes differ");
  }
  JointConfig next = q + qdot * dt;
  const Eigen::VectorXd lo = model.lowerLimits();
  const Eigen::VectorXd hi = model.upperLimits();
  for (int i = 0; i < next.size(); ++i) next[i] = std::clamp(next[i], lo[i], hi[i]);
  return next;
}

namespace {

struct Residuals {
  double position;
  double orientation;
  double weighted;
};

Residuals residualsAt(const RobotModel& model, const JointConfig& q, const Pose& target,
                      const DiffIKConfig& cfg) {
  const Pose current = forwardKinematics(model, q).ee;
  const Eigen::Matrix<double, 6, 1> err = poseErrorTwist(current, target);
  Residuals r;
  r.position = err.head<3>().norm();
  r.orientation = err.tail<3>().norm();
  r.weighted = std::sqrt(err.cwiseProduct(cfg.task_weights.cwiseProduct(err)).sum());
  return r;
}

bool withinTolerance(const Residuals& r, const DiffIKConfig& cfg) {
  if (r.position > cfg.position_tolerance) return false;
  if (cfg.positionOnly()) return true;
  return r.orientation <= cfg.orientation_tolerance;
}

}  // namespace

IKResult solvePoseIk(const RobotModel& model, const JointConfig& seed, const Pose& target,
                     const DiffIKConfig& cfg) {
  IKResult result;
  JointConfig q = seed;
  Residuals res = residualsAt(model, q, target, cfg);
  result.residual_trace.push_back(res.weighted);

  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (withinTolerance(res, cfg)) {
      result.solution = q;
      result.converged = true;
      result.iterations = it;
      result.position_residual = res.position;
      result.orientation_residual = res.orientation;
      return result;
    }
    const QPSpec spec = buildDiffIkQp(model, q, target, cfg);
    const Eigen::VectorXd qdot = solveQp(spec).x;

    // Backtrack on the weighted residual so the trace is non-increasing.
    bool improved = false;
    double alpha = 1.0;
    for (int bt = 0; bt < 8; ++bt) {
      const JointConfig q_try = integrateStep(model, q, alpha * qdot, cfg.control_period);
      const Residuals res_try = residualsAt(model, q_try, target, cfg);
      if (res_try.weighted < res.weighted) {
        q = q_try;
        res = res_try;
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    result.residual_trace.push_back(res.weighted);
    if (!improved) {
      result.solution = q;
      result.iterations = it + 1;
      result.position_residual = res.position;
      result.orientation_residual = res.orientation;
      result.failure_reason = "stalled";
      return result;
    }
  }
  result.solution = q;
  result.iterations = cfg.max_iterations;
  result.position_residual = res.position;
  result.orientation_residual = res.orientation;
  result.converged = withinTolerance(res, cfg);
  if (!result.converged) result.failure_reason = "max_iterations";
  return result;
}

SetpointStream::SetpointStream(const RobotModel& model, JointConfig q0,
                               std::vector<TimedWaypoint> waypoints, DiffIKConfig cfg,
                               double duration_s)
    : model_(model), q_(std::move(q0)), waypoints_(std::move(waypoints)), cfg_(cfg) {
  if (waypoints_.empty()) {
    throw Error(ErrorCode::DegenerateInput, "setpoint stream needs at least one waypoint");
  }
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (waypoints_[i].t <= waypoints_[i - 1].t) {
      throw Error(ErrorCode::MonotonicityViolation, "waypoint timestamps must increase");
    }
  }
  if (!(cfg_.control_period > 0.0) || !(duration_s > 0.0)) {
    throw Error(ErrorCode::NonPositiveInput, "control period and duration must be > 0");
  }
  total_steps_ = static_cast<int>(std::llround(duration_s / cfg_.control_period));
}

std::optional<Setpoint> SetpointStream::next() {
  if (step_ >= total_steps_) return std::nullopt;
  ++step_;
  const double t = step_ * cfg_.control_period;
  // Zero-order hold on the waypoint list.
  const Pose* target = &waypoints_.front().pose;
  for (const auto& wp : waypoints_) {
    if (wp.t <= t) target = &wp.pose;
    else break;
  }
  try {
    const QPSpec spec = buildDiffIkQp(model_, q_, *target, cfg_);
    const Eigen::VectorXd qdot = solveQp(spec).x;
    q_ = integrateStep(model_, q_, qdot, cfg_.control_period);
  } catch (const Error& e) {
    throw Error(e.code(), "setpoint step " + std::to_string(step_ - 1) + ": " + e.what());
  }
  return Setpoint{t, q_};
}

std::vector<Setpoint> streamSetpoints(const RobotModel& model, const JointConfig& q0,
                                      const std::vector<TimedWaypoint>& waypoints,
                                      const DiffIKConfig& cfg, double duration_s) {
  SetpointStream stream(model, q0, waypoints, cfg, duration_s);
  std::vector<Setpoint> out;
  out.reserve(stream.totalSteps());
  while (auto sp = stream.next()) out.push_back(std::move(*sp));
  return out;
}

std::vector<TimedWaypoint> loadTrajectoryCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::vector<TimedWaypoint> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line_no == 1) {
      if (line.rfind("t,", 0) != 0) {
        throw Error(ErrorCode::ParseError, "line 1: expected header t,x,y,z,qw,qx,qy,qz");
      }
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (vals.size() != 8) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected 8 columns");
    }
    Eigen::Quaterniond quat(vals[4], vals[5], vals[6], vals[7]);
    if (quat.norm() < 1e-12) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": zero quaternion");
    }
    quat.normalize();
    TimedWaypoint wp;
    wp.t = vals[0];
    wp.pose.translation = {vals[1], vals[2], vals[3]};
    wp.pose.rotation = Rotation::fromMatrixUnchecked(quat.toRotationMatrix());
    if (!out.empty() && wp.t <= out.back().t) {
      throw Error(ErrorCode::MonotonicityViolation,
                  "line " + std::to_string(line_no) + ": timestamps must increase");
    }
    out.push_back(wp);
  }
  return out;
}

}  // namespace wristkit
