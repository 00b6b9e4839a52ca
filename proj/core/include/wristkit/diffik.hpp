#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wristkit/kinematics.hpp"
#include "wristkit/qp.hpp"

namespace wristkit {

struct DiffIKConfig {
  double control_period = 1e-3;  // s
  double damping = 1e-3;         // rad^2/s^2 weight on ||qdot||^2
  // Task weights: rows 0-2 linear, 3-5 angular. Tunables, not measured values.
  Eigen::Matrix<double, 6, 1> task_weights =
      (Eigen::Matrix<double, 6, 1>() << 1.0, 1.0, 1.0, 0.5, 0.5, 0.5).finished();
  double limit_horizon = 0.9;            // eta in (0,1]: velocity-damper gain
  int max_iterations = 100;
  double position_tolerance = 1e-5;      // m
  double orientation_tolerance = 1e-4;   // rad

  bool positionOnly() const { return task_weights.tail<3>().isZero(0.0); }

  /// Same config with angular task rows weighted zero (free orientation).
  DiffIKConfig positionOnlyVariant() const {
    DiffIKConfig c = *this;
    c.task_weights.tail<3>().setZero();
    return c;
  }
};

struct IKResult {
  JointConfig solution;
  bool converged = false;
  int iterations = 0;
  double position_residual = 0.0;     // m
  double orientation_residual = 0.0;  // rad
  std::string failure_reason;         // empty when converged
  std::vector<double> residual_trace; // weighted residual per accepted iterate
};

/// Pose error as a 6-twist: [p_target - p_current; axis-angle of
/// R_target * R_current^T], base frame.
Eigen::Matrix<double, 6, 1> poseErrorTwist(const Pose& current, const Pose& target);

/// One differential-IK step as a QP over joint velocities:
///   H = J'WJ + damping*I,  g = -J'W v_des,  v_des = pose error / dt,
/// box bounds = min(velocity limit, eta * distance-to-position-limit / dt).
QPSpec buildDiffIkQp(const RobotModel& model, const JointConfig& q, const Pose& target,
                     const DiffIKConfig& cfg);

/// Euler step q + qdot*dt, clamped to the model's position limits. The clamp
/// is a no-op whenever qdot came from a buildDiffIkQp solve (the velocity
/// damper already forbids leaving the limits).
JointConfig integrateStep(const RobotModel& model, const JointConfig& q,
                          const Eigen::VectorXd& qdot, double dt);

/// Iterated build/solve/integrate until the pose residuals fall below the
/// configured tolerances. Monotone: a step that would increase the weighted
/// residual is backtracked, and the solve stops ("stalled") when no progress
/// is possible. Deterministic given the seed.
IKResult solvePoseIk(const RobotModel& model, const JointConfig& seed, const Pose& target,
                     const DiffIKConfig& cfg);

struct TimedWaypoint {
  double t = 0.0;  // s
  Pose pose;
};

struct Setpoint {
  double t = 0.0;  // s
  JointConfig q;
};

/// Joint-position setpoint generator at 1/control_period Hz. Each tick runs
/// one build/solve/integrate step toward the latest waypoint whose timestamp
/// has passed (zero-order hold). Single consumer; not thread-safe.
class SetpointStream {
 public:
  SetpointStream(const RobotModel& model, JointConfig q0,
                 std::vector<TimedWaypoint> waypoints, DiffIKConfig cfg,
                 double duration_s);

  /// Next setpoint, or nullopt once the duration is exhausted. Solver errors
  /// are rethrown with the failing step index attached.
  std::optional<Setpoint> next();

  int totalSteps() const { return total_steps_; }

 private:
  const RobotModel& model_;
  JointConfig q_;
  std::vector<TimedWaypoint> waypoints_;
  DiffIKConfig cfg_;
  int total_steps_;
  int step_ = 0;
};

/// Drains a SetpointStream into a vector.
std::vector<Setpoint> streamSetpoints(const RobotModel& model, const JointConfig& q0,
                                      const std::vector<TimedWaypoint>& waypoints,
                                      const DiffIKConfig& cfg, double duration_s);

/// CSV with header `t,x,y,z,qw,qx,qy,qz`. Throws ParseError with the
/// offending line number; timestamps must be strictly increasing.
std::vector<TimedWaypoint> loadTrajectoryCsv(const std::string& path);

}  // namespace wristkit
