#include "doctest.h"
#include "models.hpp"
#include "wristkit/robot_io.hpp"

using namespace wristkit;

TEST_CASE("bundled robots load with 6 DOF and resolved capsules") {
  const RobotModel pkm = testmodels::loadPkmArm();
  CHECK(pkm.dof() == 6);
  CHECK(pkm.hasPkmWrist());
  CHECK(pkm.capsules.size() == 7);
  for (const auto& c : pkm.capsules) CHECK(c.frame_index >= 0);

  const RobotModel serial = testmodels::loadSerialArm();
  CHECK(serial.dof() == 6);
  CHECK_FALSE(serial.hasPkmWrist());

  // Same base chain on both variants, as in the workspace comparison.
  REQUIRE(pkm.base_joints.size() == serial.base_joints.size());
  for (std::size_t i = 0; i < pkm.base_joints.size(); ++i) {
    CHECK(pkm.base_joints[i].name == serial.base_joints[i].name);
    CHECK(pkm.base_joints[i].axis == serial.base_joints[i].axis);
  }
}

TEST_CASE("file angles are degrees and convert to radians") {
  const RobotModel pkm = testmodels::loadPkmArm();
  CHECK(pkm.base_joints[0].min_position == doctest::Approx(degToRad(-170.0)));
  CHECK(pkm.base_joints[0].velocity_limit == doctest::Approx(degToRad(180.0)));
  CHECK(pkm.pkmWrist().flexion_max == doctest::Approx(degToRad(40.0)));
  CHECK(pkm.pkmWrist().ring_arc == doctest::Approx(degToRad(90.0)));
}

TEST_CASE("loader rejects malformed descriptions") {
  Json j;
  j["name"] = "bad";
  j["joints"] = Json::array();
  j["wrist"] = {{"type", "unknown"}};
  CHECK_THROWS_AS(robotModelFromJson(j), Error);

  Json j2 = Json::parse(R"({
    "name": "bad2",
    "joints": [{"name": "j1", "axis": [0, 0, 2], "limits_deg": [-90, 90],
                "velocity_limit_deg_s": 90}],
    "wrist": {"type": "serial", "joints": []}
  })");
  try {
    robotModelFromJson(j2);
    FAIL("expected InvalidModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidModel);
  }

  CHECK_THROWS_AS(loadRobotModel(testmodels::dataPath("robots/does_not_exist.json")), Error);
}

TEST_CASE("pose JSON accepts quaternion or rpy but not both") {
  const Pose p = poseFromJson(Json::parse(R"({"translation": [1, 2, 3]})"));
  CHECK(p.translation == Eigen::Vector3d(1, 2, 3));

  const Pose r = poseFromJson(Json::parse(R"({"rpy_deg": [0, 90, 0]})"));
  CHECK(r.rotation.matrix().isApprox(
      Rotation::aboutAxis({0, 1, 0}, M_PI / 2).matrix(), 1e-12));

  CHECK_THROWS_AS(
      poseFromJson(Json::parse(
          R"({"quaternion": [1, 0, 0, 0], "rpy_deg": [0, 0, 0]})")),
      Error);

  // Report serialization round trip.
  Pose q;
  q.rotation = Rotation::aboutAxis({0, 0, 1}, 0.7);
  q.translation = {0.1, -0.2, 0.3};
  const Pose back = poseFromJson(poseToJson(q));
  CHECK(back.rotation.matrix().isApprox(q.rotation.matrix(), 1e-12));
  CHECK(back.translation.isApprox(q.translation, 1e-12));
}
