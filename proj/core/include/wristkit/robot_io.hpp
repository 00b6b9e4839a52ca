#pragma once

#include <string>

#include "wristkit/json_io.hpp"
#include "wristkit/kinematics.hpp"

namespace wristkit {

/// Loads a robot description file. Angles in the file are degrees (degrees
/// per second for velocity limits) and are converted to radians on load.
/// The returned model is finalized (validated, capsule frames resolved).
RobotModel loadRobotModel(const std::string& path);
RobotModel robotModelFromJson(const Json& j);

}  // namespace wristkit
