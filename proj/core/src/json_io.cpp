#include "wristkit/json_io.hpp"

#include <fstream>

namespace wristkit {

Json poseToJson(const Pose& p) {
  const Eigen::Vector4d q = p.rotation.quaternionWxyz();
  Json j;
  j["translation"] = {p.translation.x(), p.translation.y(), p.translation.z()};
  j["quaternion"] = {q[0], q[1], q[2], q[3]};
  return j;
}

Eigen::Vector3d vec3FromJson(const Json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::ParseError, "expected a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json vec3ToJson(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Pose poseFromJson(const Json& j) {
  Pose p;
  if (j.contains("translation")) p.translation = vec3FromJson(j.at("translation"));
  if (j.contains("quaternion") && j.contains("rpy_deg")) {
    throw Error(ErrorCode::ParseError, "pose has both quaternion and rpy_deg");
  }
  if (j.contains("quaternion")) {
    const auto& q = j.at("quaternion");
    if (!q.is_array() || q.size() != 4) {
      throw Error(ErrorCode::ParseError, "quaternion must be [w,x,y,z]");
    }
    Eigen::Quaterniond quat(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                            q[3].get<double>());
    if (quat.norm() < 1e-12) {
      throw Error(ErrorCode::ParseError, "quaternion has near-zero norm");
    }
    quat.normalize();
    p.rotation = Rotation::fromMatrixUnchecked(quat.toRotationMatrix());
  } else if (j.contains("rpy_deg")) {
    const Eigen::Vector3d rpy = vec3FromJson(j.at("rpy_deg"));
    p.rotation = Rotation::aboutAxis(Eigen::Vector3d::UnitZ(), degToRad(rpy.z())) *
                 Rotation::aboutAxis(Eigen::Vector3d::UnitY(), degToRad(rpy.y())) *
                 Rotation::aboutAxis(Eigen::Vector3d::UnitX(), degToRad(rpy.x()));
  }
  return p;
}

Json loadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

}  // namespace wristkit
