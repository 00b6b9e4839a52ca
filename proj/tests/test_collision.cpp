#include "doctest.h"
#include "oracles.hpp"
#include "wristkit/collision.hpp"

#include <random>

using namespace wristkit;

namespace {

Capsule randomCapsule(std::mt19937& rng) {
  std::uniform_real_distribution<double> pos(-0.5, 0.5);
  std::uniform_real_distribution<double> rad(0.01, 0.12);
  Capsule c;
  c.a = {pos(rng), pos(rng), pos(rng)};
  c.b = {pos(rng), pos(rng), pos(rng)};
  c.radius = rad(rng);
  return c;
}

ObstacleBox randomBox(std::mt19937& rng) {
  std::uniform_real_distribution<double> pos(-0.4, 0.4);
  std::uniform_real_distribution<double> ext(0.03, 0.25);
  ObstacleBox box;
  box.pose.translation = {pos(rng), pos(rng), pos(rng)};
  box.pose.rotation = oracles::randomRotation(rng);
  box.half_extents = {ext(rng), ext(rng), ext(rng)};
  return box;
}

}  // namespace

TEST_CASE("capsule-box distance: axis-aligned hand cases") {
  ObstacleBox box;
  box.pose = Pose::identity();
  box.half_extents = {0.1, 0.1, 0.1};

  // Capsule parallel to the box face, 0.5 m out along +x.
  Capsule cap{{0.5, -0.1, 0.0}, {0.5, 0.1, 0.0}, 0.05};
  CHECK(capsuleBoxDistance(cap, box) == doctest::Approx(0.5 - 0.1 - 0.05).epsilon(1e-12));

  // Axis through the box center: clearly negative.
  Capsule through{{-0.5, 0, 0}, {0.5, 0, 0}, 0.02};
  CHECK(capsuleBoxDistance(through, box) < 0.0);
  // Fully inside: magnitude is radius plus the deepest segment penetration
  // (the segment midpoint, 0.1 m from every face).
  Capsule inside{{-0.02, 0, 0}, {0.02, 0, 0}, 0.01};
  CHECK(capsuleBoxDistance(inside, box) == doctest::Approx(-(0.01 + 0.1)).epsilon(1e-9));

  // Touching the surface with the radius exactly.
  Capsule graze{{0.15, -0.2, 0.0}, {0.15, 0.2, 0.0}, 0.05};
  CHECK(capsuleBoxDistance(graze, box) == doctest::Approx(0.0).epsilon(1e-12));

  // Corner-on approach: distance to the corner minus radius.
  Capsule corner{{0.2, 0.2, 0.2}, {0.4, 0.4, 0.4}, 0.01};
  const double corner_dist = (Eigen::Vector3d(0.2, 0.2, 0.2) - Eigen::Vector3d(0.1, 0.1, 0.1)).norm();
  CHECK(capsuleBoxDistance(corner, box) == doctest::Approx(corner_dist - 0.01).epsilon(1e-12));
}

TEST_CASE("capsule-box distance is invariant under a common rigid transform") {
  std::mt19937 rng(77);
  for (int i = 0; i < 300; ++i) {
    const Capsule cap = randomCapsule(rng);
    const ObstacleBox box = randomBox(rng);
    Pose xform;
    xform.rotation = oracles::randomRotation(rng);
    std::uniform_real_distribution<double> pos(-1.0, 1.0);
    xform.translation = {pos(rng), pos(rng), pos(rng)};

    Capsule cap2{xform * cap.a, xform * cap.b, cap.radius};
    ObstacleBox box2 = box;
    box2.pose = xform * box.pose;
    CHECK(capsuleBoxDistance(cap, box) ==
          doctest::Approx(capsuleBoxDistance(cap2, box2)).epsilon(1e-9));
  }
}

TEST_CASE("capsule-box sign agrees with the Monte-Carlo containment oracle") {
  std::mt19937 rng(123);
  std::mt19937 mc_rng(321);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Capsule cap = randomCapsule(rng);
    const ObstacleBox box = randomBox(rng);
    const double d = capsuleBoxDistance(cap, box);
    if (std::abs(d) < 1e-3) continue;  // MC cannot certify the near-touching band
    ++checked;
    const bool mc_hit =
        oracles::capsuleBoxIntersectMonteCarlo(cap, box.pose, box.half_extents, 100000, mc_rng);
    if (d <= 0.0) {
      CHECK(mc_hit);
    } else {
      CHECK_FALSE(mc_hit);
    }
  }
  CHECK(checked > 800);
}

TEST_CASE("capsule-capsule distance") {
  Capsule a{{0, 0, 0}, {1, 0, 0}, 0.1};
  Capsule b{{0, 0.5, 0}, {1, 0.5, 0}, 0.1};
  CHECK(capsuleCapsuleDistance(a, b) == doctest::Approx(0.3).epsilon(1e-12));

  Capsule crossing{{0.5, -0.5, 0.05}, {0.5, 0.5, 0.05}, 0.1};
  CHECK(capsuleCapsuleDistance(a, crossing) < 0.0);

  // Degenerate (point) capsules.
  Capsule pa{{0, 0, 0}, {0, 0, 0}, 0.05};
  Capsule pb{{0, 0, 0.2}, {0, 0, 0.2}, 0.05};
  CHECK(capsuleCapsuleDistance(pa, pb) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("segment-segment distance cross-checked by dense sampling") {
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d p0(pos(rng), pos(rng), pos(rng));
    const Eigen::Vector3d p1(pos(rng), pos(rng), pos(rng));
    const Eigen::Vector3d q0(pos(rng), pos(rng), pos(rng));
    const Eigen::Vector3d q1(pos(rng), pos(rng), pos(rng));
    const double exact = segmentSegmentDistance(p0, p1, q0, q1);
    double sampled = 1e9;
    for (int s = 0; s <= 60; ++s) {
      for (int t = 0; t <= 60; ++t) {
        const Eigen::Vector3d u = p0 + (p1 - p0) * (s / 60.0);
        const Eigen::Vector3d v = q0 + (q1 - q0) * (t / 60.0);
        sampled = std::min(sampled, (u - v).norm());
      }
    }
    CHECK(exact <= sampled + 1e-9);
    // The grid over-estimates by at most half a step in each parameter.
    const double resolution = ((p1 - p0).norm() + (q1 - q0).norm()) / 120.0;
    CHECK(exact >= sampled - resolution - 1e-9);
  }
}
