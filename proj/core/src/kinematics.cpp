#include "wristkit/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace wristkit {

namespace {

void validateJoint(const JointSpec& j) {
  if (std::abs(j.axis.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidModel, "joint '" + j.name + "' axis is not unit-norm");
  }
  if (!(j.min_position < j.max_position)) {
    throw Error(ErrorCode::InvalidModel, "joint '" + j.name + "' has min >= max");
  }
  if (!(j.velocity_limit > 0.0)) {
    throw Error(ErrorCode::InvalidModel, "joint '" + j.name + "' velocity limit must be > 0");
  }
}

Eigen::Vector3d tangentTowards(const Eigen::Vector3d& pole, const Eigen::Vector3d& target) {
  const Eigen::Vector3d t = target - pole.dot(target) * pole;
  const double n = t.norm();
  if (n < 1e-12) return Eigen::Vector3d::Zero();
  return t / n;
}

double signedAngleAbout(const Eigen::Vector3d& axis, const Eigen::Vector3d& from,
                        const Eigen::Vector3d& to) {
  const Eigen::Vector3d f = from - axis.dot(from) * axis;
  const Eigen::Vector3d t = to - axis.dot(to) * axis;
  return std::atan2(axis.dot(f.cross(t)), f.dot(t));
}

// Points along the great-circle arc from unit vector u to unit vector v,
// scaled to `radius`, split into `segments` chord capsules.
std::vector<Capsule> arcCapsules(const Eigen::Vector3d& u, const Eigen::Vector3d& v,
                                 double radius, double capsule_radius, int segments) {
  std::vector<Capsule> out;
  const double ang = std::atan2(u.cross(v).norm(), u.dot(v));
  Eigen::Vector3d axis = u.cross(v);
  if (axis.norm() < 1e-12) {
    // Parallel endpoints: a single degenerate capsule.
    out.push_back({u * radius, v * radius, capsule_radius});
    return out;
  }
  axis.normalize();
  Eigen::Vector3d prev = u * radius;
  for (int s = 1; s <= segments; ++s) {
    const double a = ang * static_cast<double>(s) / segments;
    const Eigen::Vector3d p = Rotation::aboutAxis(axis, a) * u * radius;
    out.push_back({prev, p, capsule_radius});
    prev = p;
  }
  return out;
}

}  // namespace

int RobotModel::wristDof() const {
  if (hasPkmWrist()) return 2;
  return static_cast<int>(std::get<SerialWristModel>(wrist).joints.size());
}

int RobotModel::dof() const {
  return static_cast<int>(base_joints.size()) + wristDof();
}

std::vector<std::string> RobotModel::frameNames() const {
  std::vector<std::string> names;
  names.reserve(base_joints.size() + 4);
  names.emplace_back("base");
  for (const auto& j : base_joints) names.push_back(j.name);
  if (hasPkmWrist()) {
    names.emplace_back("wrist_pivot");
    names.emplace_back("wrist_ring");
    names.emplace_back("wrist_platform");
  } else {
    for (const auto& j : std::get<SerialWristModel>(wrist).joints) names.push_back(j.name);
  }
  names.emplace_back("tool");
  return names;
}

Eigen::VectorXd RobotModel::lowerLimits() const {
  Eigen::VectorXd lo(dof());
  int k = 0;
  for (const auto& j : base_joints) lo[k++] = j.min_position;
  if (hasPkmWrist()) {
    const auto& w = pkmWrist();
    lo[k++] = w.flexion_min;
    lo[k++] = w.deviation_min;
  } else {
    for (const auto& j : std::get<SerialWristModel>(wrist).joints) lo[k++] = j.min_position;
  }
  return lo;
}

Eigen::VectorXd RobotModel::upperLimits() const {
  Eigen::VectorXd hi(dof());
  int k = 0;
  for (const auto& j : base_joints) hi[k++] = j.max_position;
  if (hasPkmWrist()) {
    const auto& w = pkmWrist();
    hi[k++] = w.flexion_max;
    hi[k++] = w.deviation_max;
  } else {
    for (const auto& j : std::get<SerialWristModel>(wrist).joints) hi[k++] = j.max_position;
  }
  return hi;
}

Eigen::VectorXd RobotModel::velocityLimits() const {
  Eigen::VectorXd v(dof());
  int k = 0;
  for (const auto& j : base_joints) v[k++] = j.velocity_limit;
  if (hasPkmWrist()) {
    v[k++] = pkmWrist().velocity_limit;
    v[k++] = pkmWrist().velocity_limit;
  } else {
    for (const auto& j : std::get<SerialWristModel>(wrist).joints) v[k++] = j.velocity_limit;
  }
  return v;
}

JointConfig RobotModel::midConfig() const {
  return 0.5 * (lowerLimits() + upperLimits());
}

void RobotModel::finalize() {
  for (const auto& j : base_joints) validateJoint(j);
  if (hasPkmWrist()) {
    const auto& w = pkmWrist();
    if (std::abs(w.flexion_axis.norm() - 1.0) > 1e-9 ||
        std::abs(w.deviation_axis.norm() - 1.0) > 1e-9) {
      throw Error(ErrorCode::InvalidModel, "wrist axes must be unit-norm");
    }
    if (std::abs(w.flexion_axis.dot(w.deviation_axis)) > 1e-9) {
      throw Error(ErrorCode::InvalidModel, "wrist axes must be orthogonal");
    }
    if (!w.transmission_matrix.isApprox(Eigen::Matrix2d::Identity(), 0.0)) {
      throw Error(ErrorCode::InvalidModel, "parallel wrist transmission must be identity");
    }
    if (!(w.flexion_min < w.flexion_max) || !(w.deviation_min < w.deviation_max)) {
      throw Error(ErrorCode::InvalidModel, "wrist ROM bounds out of order");
    }
    if (!(w.velocity_limit > 0.0)) {
      throw Error(ErrorCode::InvalidModel, "wrist velocity limit must be > 0");
    }
    for (double arc : {w.ring_arc, w.crank_arc, w.coupler_arc}) {
      if (!(arc > 0.0 && arc < M_PI)) {
        throw Error(ErrorCode::InvalidModel, "linkage arcs must lie in (0, pi)");
      }
    }
    if (!(w.linkage_radius > 0.0) || !(w.leg_capsule_radius > 0.0)) {
      throw Error(ErrorCode::InvalidModel, "linkage radii must be > 0");
    }
  } else {
    for (const auto& j : std::get<SerialWristModel>(wrist).joints) validateJoint(j);
  }

  const auto names = frameNames();
  for (auto& c : capsules) {
    if (!(c.radius > 0.0)) {
      throw Error(ErrorCode::InvalidModel, "capsule radius must be > 0");
    }
    const auto it = std::find(names.begin(), names.end(), c.frame);
    if (it == names.end()) {
      throw Error(ErrorCode::InvalidModel, "capsule references unknown frame '" + c.frame + "'");
    }
    c.frame_index = static_cast<int>(it - names.begin());
  }

  self_collision_ignore_indices.clear();
  for (const auto& [a, b] : self_collision_ignore) {
    const auto ia = std::find(names.begin(), names.end(), a);
    const auto ib = std::find(names.begin(), names.end(), b);
    if (ia == names.end() || ib == names.end()) {
      throw Error(ErrorCode::InvalidModel,
                  "self_collision_ignore references unknown frame '" +
                      (ia == names.end() ? a : b) + "'");
    }
    self_collision_ignore_indices.emplace_back(static_cast<int>(ia - names.begin()),
                                               static_cast<int>(ib - names.begin()));
  }
}

bool RobotModel::selfCollisionIgnored(int frame_a, int frame_b) const {
  for (const auto& [a, b] : self_collision_ignore_indices) {
    if ((a == frame_a && b == frame_b) || (a == frame_b && b == frame_a)) return true;
  }
  return false;
}

FkResult forwardKinematics(const RobotModel& model, const JointConfig& q) {
  if (q.size() != model.dof()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(model.dof()) + " joint angles, got " +
                    std::to_string(q.size()));
  }
  FkResult result;
  result.frames.reserve(model.base_joints.size() + 4);
  Pose cur = Pose::identity();
  result.frames.push_back(cur);  // "base"
  int k = 0;
  for (const auto& j : model.base_joints) {
    cur = cur * j.origin * Pose{Rotation::aboutAxis(j.axis, q[k++]), Eigen::Vector3d::Zero()};
    result.frames.push_back(cur);
  }
  if (model.hasPkmWrist()) {
    const auto& w = model.pkmWrist();
    const Pose pivot = cur * w.pivot;
    result.frames.push_back(pivot);
    const Pose ring = pivot * Pose{Rotation::aboutAxis(w.flexion_axis, q[k]), Eigen::Vector3d::Zero()};
    result.frames.push_back(ring);
    const Pose platform =
        ring * Pose{Rotation::aboutAxis(w.deviation_axis, q[k + 1]), Eigen::Vector3d::Zero()};
    result.frames.push_back(platform);
    cur = platform;
    k += 2;
  } else {
    for (const auto& j : std::get<SerialWristModel>(model.wrist).joints) {
      cur = cur * j.origin * Pose{Rotation::aboutAxis(j.axis, q[k++]), Eigen::Vector3d::Zero()};
      result.frames.push_back(cur);
    }
  }
  cur = cur * model.tool;
  result.frames.push_back(cur);
  result.ee = cur;
  return result;
}

Eigen::Matrix2d wristTransmission(const RobotModel& model) {
  if (!model.hasPkmWrist()) {
    throw Error(ErrorCode::NotParallelWrist, "robot '" + model.name + "' has a serial wrist");
  }
  return model.pkmWrist().transmission_matrix;
}

Eigen::MatrixXd geometricJacobian(const RobotModel& model, const JointConfig& q) {
  const FkResult fk = forwardKinematics(model, q);
  const Eigen::Vector3d p_ee = fk.ee.translation;
  Eigen::MatrixXd jac(6, model.dof());
  int k = 0;
  // Base-frame axis of joint k and a point on it.
  auto fill = [&](const Eigen::Vector3d& axis_world, const Eigen::Vector3d& point) {
    jac.block<3, 1>(0, k) = axis_world.cross(p_ee - point);
    jac.block<3, 1>(3, k) = axis_world;
    ++k;
  };
  for (std::size_t i = 0; i < model.base_joints.size(); ++i) {
    const Pose& frame = fk.frames[i + 1];
    fill(frame.rotation * model.base_joints[i].axis, frame.translation);
  }
  if (model.hasPkmWrist()) {
    const auto& w = model.pkmWrist();
    const std::size_t pivot_idx = model.base_joints.size() + 1;
    const Pose& pivot = fk.frames[pivot_idx];
    const Pose& ring = fk.frames[pivot_idx + 1];
    fill(pivot.rotation * w.flexion_axis, pivot.translation);
    fill(ring.rotation * w.deviation_axis, pivot.translation);
  } else {
    const auto& joints = std::get<SerialWristModel>(model.wrist).joints;
    for (std::size_t i = 0; i < joints.size(); ++i) {
      const Pose& frame = fk.frames[model.base_joints.size() + 1 + i];
      fill(frame.rotation * joints[i].axis, frame.translation);
    }
  }
  return jac;
}

Eigen::VectorXd staticWrenchToJointTorques(const RobotModel& model, const JointConfig& q,
                                           const Wrench& w) {
  const Eigen::MatrixXd jac = geometricJacobian(model, q);
  Eigen::Matrix<double, 6, 1> wrench;
  if (w.frame == "ee") {
    const Rotation r = forwardKinematics(model, q).ee.rotation;
    wrench.head<3>() = r * w.force;
    wrench.tail<3>() = r * w.moment;
  } else {
    wrench.head<3>() = w.force;
    wrench.tail<3>() = w.moment;
  }
  return jac.transpose() * wrench;
}

bool romCheck(const PkmWristModel& wrist, double flexion, double deviation) {
  return flexion >= wrist.flexion_min && flexion <= wrist.flexion_max &&
         deviation >= wrist.deviation_min && deviation <= wrist.deviation_max;
}

namespace {

struct DriveLegFrame {
  Eigen::Vector3d crank_axis;    // c, fixed in pivot frame
  Eigen::Vector3d platform_att;  // e, fixed in platform frame
  Eigen::Vector3d normal;        // platform normal, fixed in platform frame
};

DriveLegFrame driveLegFrame(const PkmWristModel& w) {
  const Eigen::Vector3d n = w.toolAxis();
  return {-w.deviation_axis, -n, n};
}

// Unit vector at arc `alpha` from `pole`, offset by spherical angle `phi`
// from tangent direction `u0` (right-handed about `pole`).
Eigen::Vector3d onCone(const Eigen::Vector3d& pole, const Eigen::Vector3d& u0,
                       double alpha, double phi) {
  const Eigen::Vector3d u =
      std::cos(phi) * u0 + std::sin(phi) * pole.cross(u0);
  return std::cos(alpha) * pole + std::sin(alpha) * u;
}

struct LegSolution {
  Eigen::Vector3d d;       // first passive joint axis, pivot frame
  double crank_abs;        // crank rotation about c, absolute (home tangent basis)
  double elbow_interior;   // spherical-triangle interior angle at d
  double platform_interior;  // interior angle at e
};

LegSolution solveLeg(const PkmWristModel& w, const Eigen::Vector3d& c,
                     const Eigen::Vector3d& e_star) {
  const double a1 = w.crank_arc;
  const double a2 = w.coupler_arc;
  const double cos_g = std::clamp(c.dot(e_star), -1.0, 1.0);
  const double gamma = std::acos(cos_g);
  const double sin_g = std::sin(gamma);
  if (sin_g < 1e-12) {
    // Platform attachment collinear with the crank axis: solvable only when
    // the two arcs line up exactly.
    if (std::abs(std::cos(a2) - cos_g * std::cos(a1)) > 1e-9) {
      throw Error(ErrorCode::ClosureFailure, "attachment collinear with crank axis");
    }
    throw Error(ErrorCode::ClosureFailure, "degenerate attachment direction");
  }
  const double cos_bend = (std::cos(a2) - cos_g * std::cos(a1)) / (sin_g * std::sin(a1));
  if (std::abs(cos_bend) > 1.0 + 1e-12) {
    throw Error(ErrorCode::ClosureFailure,
                "crank/coupler arcs cannot span the required attachment direction");
  }
  const double bend = std::acos(std::clamp(cos_bend, -1.0, 1.0));
  const Eigen::Vector3d u = tangentTowards(c, e_star);
  // Fixed elbow branch: +bend.
  const Eigen::Vector3d d = onCone(c, u, a1, bend);

  LegSolution sol;
  sol.d = d;
  // Crank angle measured in a fixed home tangent basis about c.
  const Eigen::Vector3d u_home = tangentTowards(c, -w.toolAxis().eval());
  sol.crank_abs = signedAngleAbout(c, onCone(c, u_home, a1, 0.0), d);

  const double cos_elbow =
      (cos_g - std::cos(a1) * std::cos(a2)) / (std::sin(a1) * std::sin(a2));
  sol.elbow_interior = std::acos(std::clamp(cos_elbow, -1.0, 1.0));
  const double cos_plat =
      (std::cos(a1) - cos_g * std::cos(a2)) / (sin_g * std::sin(a2));
  sol.platform_interior = std::acos(std::clamp(cos_plat, -1.0, 1.0));
  return sol;
}

}  // namespace

PkmClosure pkmClosure(const PkmWristModel& wrist, double flexion, double deviation) {
  const DriveLegFrame leg = driveLegFrame(wrist);
  const Rotation r_platform = Rotation::aboutAxis(wrist.flexion_axis, flexion) *
                              Rotation::aboutAxis(wrist.deviation_axis, deviation);
  const Eigen::Vector3d e_star = r_platform * leg.platform_att;

  const LegSolution sol = solveLeg(wrist, leg.crank_axis, e_star);
  const LegSolution home = solveLeg(wrist, leg.crank_axis, leg.platform_att);

  PkmClosure out;
  out.crank_angle = sol.crank_abs - home.crank_abs;
  out.elbow_angle = sol.elbow_interior - home.elbow_interior;
  out.platform_angle = sol.platform_interior - home.platform_interior;

  // Reconstruct the coupler's far end from the solved chain and measure how
  // far the implied platform normal is from the required one.
  const Eigen::Vector3d t = tangentTowards(sol.d, leg.crank_axis);
  const double swing = std::atan2(sol.d.cross(t).dot(e_star), t.dot(e_star));
  const Eigen::Vector3d e_rec = onCone(sol.d, t, wrist.coupler_arc, swing);

  // Achieved deviation angle implied by the reconstructed attachment.
  const Rotation r_flex = Rotation::aboutAxis(wrist.flexion_axis, flexion);
  const Eigen::Vector3d v = r_flex.inverse() * e_rec;
  const double dev_achieved =
      signedAngleAbout(wrist.deviation_axis, leg.platform_att, v);
  const Eigen::Vector3d n_achieved =
      (r_flex * Rotation::aboutAxis(wrist.deviation_axis, dev_achieved)) * leg.normal;
  const Eigen::Vector3d n_required = r_platform * leg.normal;
  out.residual = std::atan2(n_achieved.cross(n_required).norm(), n_achieved.dot(n_required));
  return out;
}

PkmLegCapsules pkmLegCapsules(const PkmWristModel& wrist, double flexion, double deviation) {
  const DriveLegFrame leg = driveLegFrame(wrist);
  const Rotation r_flex = Rotation::aboutAxis(wrist.flexion_axis, flexion);
  const Rotation r_platform =
      r_flex * Rotation::aboutAxis(wrist.deviation_axis, deviation);
  const Eigen::Vector3d e_star = r_platform * leg.platform_att;
  const LegSolution sol = solveLeg(wrist, leg.crank_axis, e_star);

  constexpr int kSegments = 3;
  PkmLegCapsules out;
  // Ring: from the flexion bearing to the (rotated) deviation bearing.
  out.ring = arcCapsules(wrist.flexion_axis, r_flex * wrist.deviation_axis,
                         wrist.linkage_radius, wrist.leg_capsule_radius, kSegments);
  out.crank = arcCapsules(leg.crank_axis, sol.d, wrist.linkage_radius,
                          wrist.leg_capsule_radius, kSegments);
  out.coupler = arcCapsules(sol.d, e_star, wrist.linkage_radius,
                            wrist.leg_capsule_radius, kSegments);
  return out;
}

}  // namespace wristkit
