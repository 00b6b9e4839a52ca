#include "wristkit/robot_io.hpp"

namespace wristkit {

namespace {

JointSpec jointFromJson(const Json& j) {
  JointSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.axis = vec3FromJson(j.at("axis"));
  if (j.contains("origin")) spec.origin = poseFromJson(j.at("origin"));
  const auto& lim = j.at("limits_deg");
  if (!lim.is_array() || lim.size() != 2) {
    throw Error(ErrorCode::ParseError, "joint '" + spec.name + "': limits_deg must be [min,max]");
  }
  spec.min_position = degToRad(lim[0].get<double>());
  spec.max_position = degToRad(lim[1].get<double>());
  spec.velocity_limit = degToRad(j.at("velocity_limit_deg_s").get<double>());
  return spec;
}

PkmWristModel pkmWristFromJson(const Json& j) {
  PkmWristModel w;
  if (j.contains("pivot")) w.pivot = poseFromJson(j.at("pivot"));
  if (j.contains("flexion_axis")) w.flexion_axis = vec3FromJson(j.at("flexion_axis"));
  if (j.contains("deviation_axis")) w.deviation_axis = vec3FromJson(j.at("deviation_axis"));
  if (j.contains("rom_deg")) {
    const auto& rom = j.at("rom_deg");
    const auto& fe = rom.at("flexion");
    const auto& ru = rom.at("deviation");
    w.flexion_min = degToRad(fe[0].get<double>());
    w.flexion_max = degToRad(fe[1].get<double>());
    w.deviation_min = degToRad(ru[0].get<double>());
    w.deviation_max = degToRad(ru[1].get<double>());
  }
  if (j.contains("velocity_limit_deg_s")) {
    w.velocity_limit = degToRad(j.at("velocity_limit_deg_s").get<double>());
  }
  if (j.contains("transmission")) {
    const auto& t = j.at("transmission");
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) w.transmission_matrix(r, c) = t[r][c].get<double>();
  }
  if (j.contains("linkage")) {
    const auto& l = j.at("linkage");
    if (l.contains("ring_arc_deg")) w.ring_arc = degToRad(l.at("ring_arc_deg").get<double>());
    if (l.contains("crank_arc_deg")) w.crank_arc = degToRad(l.at("crank_arc_deg").get<double>());
    if (l.contains("coupler_arc_deg"))
      w.coupler_arc = degToRad(l.at("coupler_arc_deg").get<double>());
    if (l.contains("radius_m")) w.linkage_radius = l.at("radius_m").get<double>();
    if (l.contains("capsule_radius_m"))
      w.leg_capsule_radius = l.at("capsule_radius_m").get<double>();
  }
  return w;
}

}  // namespace

RobotModel robotModelFromJson(const Json& j) {
  RobotModel model;
  model.name = j.value("name", std::string("robot"));
  for (const auto& joint : j.at("joints")) {
    model.base_joints.push_back(jointFromJson(joint));
  }
  const auto& wrist = j.at("wrist");
  const std::string type = wrist.at("type").get<std::string>();
  if (type == "pkm") {
    model.wrist = pkmWristFromJson(wrist);
  } else if (type == "serial") {
    SerialWristModel sw;
    for (const auto& joint : wrist.at("joints")) sw.joints.push_back(jointFromJson(joint));
    model.wrist = sw;
  } else {
    throw Error(ErrorCode::ParseError, "unknown wrist type '" + type + "'");
  }
  if (j.contains("tool")) model.tool = poseFromJson(j.at("tool"));
  if (j.contains("capsules")) {
    for (const auto& c : j.at("capsules")) {
      LinkCapsule cap;
      cap.frame = c.at("frame").get<std::string>();
      cap.a = vec3FromJson(c.at("a"));
      cap.b = vec3FromJson(c.at("b"));
      cap.radius = c.at("radius").get<double>();
      model.capsules.push_back(cap);
    }
  }
  if (j.contains("self_collision_ignore")) {
    for (const auto& pair : j.at("self_collision_ignore")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw Error(ErrorCode::ParseError, "self_collision_ignore entries must be pairs");
      }
      model.self_collision_ignore.emplace_back(pair[0].get<std::string>(),
                                               pair[1].get<std::string>());
    }
  }
  model.finalize();
  return model;
}

RobotModel loadRobotModel(const std::string& path) {
  return robotModelFromJson(loadJsonFile(path));
}

}  // namespace wristkit
