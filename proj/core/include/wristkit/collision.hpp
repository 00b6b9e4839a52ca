#pragma once

#include <string>

#include "wristkit/geom.hpp"
#include "wristkit/kinematics.hpp"

namespace wristkit {

/// Oriented box: the pose places the box center; half_extents are along the
/// box frame axes.
struct ObstacleBox {
  std::string name;
  Pose pose;
  Eigen::Vector3d half_extents{0.1, 0.1, 0.1};
};

/// Signed clearance between a capsule and a solid oriented box:
///   > 0  separated by that many meters,
///   <= 0 intersecting; the magnitude is radius + deepest segment
///        penetration (an underestimate of the separation needed).
/// Exact for the separated branch; invariant under a common rigid transform
/// of both primitives.
double capsuleBoxDistance(const Capsule& capsule, const ObstacleBox& box);

/// Signed clearance between two capsules (segment-segment distance minus the
/// radii).
double capsuleCapsuleDistance(const Capsule& a, const Capsule& b);

/// Minimum distance between two segments.
double segmentSegmentDistance(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                              const Eigen::Vector3d& q0, const Eigen::Vector3d& q1);

}  // namespace wristkit
