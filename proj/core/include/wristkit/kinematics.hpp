#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "wristkit/geom.hpp"

namespace wristkit {

/// Revolute joint in a serial chain.
struct JointSpec {
  std::string name;
  Eigen::Vector3d axis{Eigen::Vector3d::UnitZ()};  // unit, in parent frame
  Pose origin;                                     // parent frame -> joint frame
  double min_position = -M_PI;                     // rad
  double max_position = M_PI;                      // rad
  double velocity_limit = 1.0;                     // rad/s
};

/// Decoupled 2-DOF parallel spherical wrist.
///
/// Both DOFs rotate about axes through a single pivot point. Motor-to-DOF
/// transmission is the identity: motor 0 drives flexion/extension, motor 1
/// drives radial/ulnar deviation, independently. The drive leg for the
/// deviation DOF is a spherical RR chain (crank + coupler arcs) whose passive
/// angles are recovered by pkmClosure(); the flexion DOF is carried by a
/// single revolute ring link.
struct PkmWristModel {
  Pose pivot;                                          // forearm frame -> pivot frame
  Eigen::Vector3d flexion_axis{Eigen::Vector3d::UnitY()};    // in pivot frame
  Eigen::Vector3d deviation_axis{Eigen::Vector3d::UnitX()};  // in pivot frame
  double flexion_min = degToRad(-40.0);
  double flexion_max = degToRad(40.0);
  double deviation_min = degToRad(-40.0);
  double deviation_max = degToRad(40.0);
  double velocity_limit = 10.0;  // rad/s, per motor
  Eigen::Matrix2d transmission_matrix{Eigen::Matrix2d::Identity()};

  // Linkage arcs (rad). Defaults are the 90/90/90 Agile-Eye-like geometry.
  double ring_arc = degToRad(90.0);     // R leg: flexion bearing -> platform bearing
  double crank_arc = degToRad(90.0);    // RR leg: motor axis -> first passive joint
  double coupler_arc = degToRad(90.0);  // RR leg: first passive joint -> platform joint
  double linkage_radius = 0.03;         // m, radius the leg links run at
  double leg_capsule_radius = 0.006;    // m

  /// Tool-normal direction in the pivot frame (deviation x flexion).
  Eigen::Vector3d toolAxis() const { return deviation_axis.cross(flexion_axis); }
};

struct SerialWristModel {
  std::vector<JointSpec> joints;
};

/// Collision capsule attached to a named FK frame. Endpoints in that frame.
struct LinkCapsule {
  std::string frame;
  Eigen::Vector3d a{Eigen::Vector3d::Zero()};
  Eigen::Vector3d b{Eigen::Vector3d::Zero()};
  double radius = 0.01;
  int frame_index = -1;  // resolved against RobotModel::frameNames()
};

using JointConfig = Eigen::VectorXd;

struct RobotModel {
  std::string name;
  std::vector<JointSpec> base_joints;
  std::variant<PkmWristModel, SerialWristModel> wrist;
  Pose tool;  // wrist platform / last joint frame -> tool frame
  std::vector<LinkCapsule> capsules;
  // Frame pairs whose capsules are allowed to touch (physically adjacent
  // parts that span non-consecutive frames, e.g. forearm and wrist platform).
  std::vector<std::pair<std::string, std::string>> self_collision_ignore;
  std::vector<std::pair<int, int>> self_collision_ignore_indices;  // resolved

  bool selfCollisionIgnored(int frame_a, int frame_b) const;

  bool hasPkmWrist() const { return std::holds_alternative<PkmWristModel>(wrist); }
  const PkmWristModel& pkmWrist() const { return std::get<PkmWristModel>(wrist); }

  int dof() const;
  int wristDof() const;

  /// FK frame names in order: "base", base joints, wrist frames, "tool".
  /// PKM wrist contributes "wrist_pivot", "wrist_ring", "wrist_platform".
  std::vector<std::string> frameNames() const;

  Eigen::VectorXd lowerLimits() const;
  Eigen::VectorXd upperLimits() const;
  Eigen::VectorXd velocityLimits() const;

  /// Config with every joint at the middle of its position range.
  JointConfig midConfig() const;

  /// Resolves capsule frame names to indices; validates invariants
  /// (unit axes, limit ordering, orthogonal wrist axes, identity transmission).
  /// Throws InvalidModel on violation.
  void finalize();
};

struct FkResult {
  std::vector<Pose> frames;  // same order as RobotModel::frameNames()
  Pose ee;                   // == frames.back()
};

/// Frame poses in the robot base frame. Throws DimensionMismatch if q.size()
/// != model.dof().
FkResult forwardKinematics(const RobotModel& model, const JointConfig& q);

/// Motor-rate to DOF-rate map of the parallel wrist (identity by
/// construction). Throws NotParallelWrist for serial-wrist models.
Eigen::Matrix2d wristTransmission(const RobotModel& model);

/// Geometric Jacobian at the end-effector origin, base frame: rows 0-2 linear
/// (m/s per rad/s), rows 3-5 angular (rad/s per rad/s).
Eigen::MatrixXd geometricJacobian(const RobotModel& model, const JointConfig& q);

/// Joint torques statically balancing a wrench applied at the end effector:
/// tau = J^T w, with `w` rotated into the base frame first when expressed in
/// the "ee" frame. Moment is taken about the end-effector origin.
Eigen::VectorXd staticWrenchToJointTorques(const RobotModel& model,
                                           const JointConfig& q,
                                           const Wrench& w);

struct PkmClosure {
  double crank_angle = 0.0;     // rad, drive motor/crank rotation from home
  double elbow_angle = 0.0;     // rad, passive crank-coupler joint, from home
  double platform_angle = 0.0;  // rad, passive coupler-platform joint, from home
  double residual = 0.0;        // rad, required vs achieved platform normal
};

/// Solves the RR drive-leg loop for a commanded (flexion, deviation) pair.
/// Throws ClosureFailure when the crank/coupler arcs cannot span the
/// required platform attachment direction.
PkmClosure pkmClosure(const PkmWristModel& wrist, double flexion, double deviation);

struct Capsule {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
  double radius;
};

/// Linkage capsules (ring, crank, coupler) in the pivot frame for a given
/// wrist configuration; used for visualization and leg self-collision checks.
/// Each arc link is approximated by a short chain of capsules.
struct PkmLegCapsules {
  std::vector<Capsule> ring;
  std::vector<Capsule> crank;
  std::vector<Capsule> coupler;
};
PkmLegCapsules pkmLegCapsules(const PkmWristModel& wrist, double flexion,
                              double deviation);

/// True iff both wrist angles are inside the (inclusive) range of motion.
bool romCheck(const PkmWristModel& wrist, double flexion, double deviation);

}  // namespace wristkit
