#pragma once

#include <nlohmann/json.hpp>

#include "wristkit/geom.hpp"

namespace wristkit {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

/// Report form: {"translation": [x,y,z], "quaternion": [w,x,y,z]}.
Json poseToJson(const Pose& p);

/// Accepts "translation" plus either "quaternion" ([w,x,y,z]) or
/// "rpy_deg" ([roll,pitch,yaw], extrinsic XYZ); both default to identity.
Pose poseFromJson(const Json& j);

Eigen::Vector3d vec3FromJson(const Json& j);
Json vec3ToJson(const Eigen::Vector3d& v);

/// Parses a JSON file, wrapping parse failures in ParseError.
Json loadJsonFile(const std::string& path);

}  // namespace wristkit
