// Small hand-built robot models shared across tests.
#pragma once

#include <string>

#include "wristkit/robot_io.hpp"

namespace testmodels {

inline std::string dataPath(const std::string& rel) {
  return std::string(WRISTKIT_DATA_DIR) + "/" + rel;
}

// 2-DOF parallel wrist alone: pivot at the origin, flexion about y,
// deviation about x, tool 0.1 m along +z.
inline wristkit::RobotModel pkmOnly() {
  wristkit::RobotModel model;
  model.name = "pkm_only";
  wristkit::PkmWristModel wrist;
  wrist.flexion_axis = Eigen::Vector3d::UnitY();
  wrist.deviation_axis = Eigen::Vector3d::UnitX();
  model.wrist = wrist;
  model.tool = wristkit::Pose::fromTranslation({0, 0, 0.1});
  model.finalize();
  return model;
}

// Single revolute joint about z with the tool on the joint axis.
inline wristkit::RobotModel singleJointOnAxis() {
  wristkit::RobotModel model;
  model.name = "single_joint";
  wristkit::JointSpec j;
  j.name = "j1";
  j.axis = Eigen::Vector3d::UnitZ();
  j.min_position = -3.0;
  j.max_position = 3.0;
  j.velocity_limit = 2.0;
  model.base_joints.push_back(j);
  model.wrist = wristkit::SerialWristModel{};
  model.tool = wristkit::Pose::fromTranslation({0, 0, 0.3});
  model.finalize();
  return model;
}

// Single revolute joint about y with a lever arm along +x.
inline wristkit::RobotModel singleJointLever(double lever) {
  wristkit::RobotModel model;
  model.name = "lever";
  wristkit::JointSpec j;
  j.name = "j1";
  j.axis = Eigen::Vector3d::UnitY();
  j.min_position = -3.0;
  j.max_position = 3.0;
  j.velocity_limit = 2.0;
  model.base_joints.push_back(j);
  model.wrist = wristkit::SerialWristModel{};
  model.tool = wristkit::Pose::fromTranslation({lever, 0, 0});
  model.finalize();
  return model;
}

// Planar 2R arm in the xz-plane (both joints about y), link lengths 0.3/0.25.
inline wristkit::RobotModel planarTwoLink() {
  wristkit::RobotModel model;
  model.name = "planar_2r";
  wristkit::JointSpec j1;
  j1.name = "j1";
  j1.axis = Eigen::Vector3d::UnitY();
  j1.min_position = -2.8;
  j1.max_position = 2.8;
  j1.velocity_limit = 3.0;
  wristkit::JointSpec j2 = j1;
  j2.name = "j2";
  j2.origin = wristkit::Pose::fromTranslation({0.3, 0, 0});
  model.base_joints = {j1, j2};
  model.wrist = wristkit::SerialWristModel{};
  model.tool = wristkit::Pose::fromTranslation({0.25, 0, 0});
  model.finalize();
  return model;
}

inline wristkit::RobotModel loadPkmArm() {
  return wristkit::loadRobotModel(dataPath("robots/arm_pkm_wrist.json"));
}

inline wristkit::RobotModel loadSerialArm() {
  return wristkit::loadRobotModel(dataPath("robots/arm_serial_wrist.json"));
}

}  // namespace testmodels
