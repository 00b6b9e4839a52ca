#pragma once

#include <Eigen/Dense>
#include <string>

#include "wristkit/error.hpp"

namespace wristkit {

/// Proper rotation matrix (3x3 orthonormal, det +1).
///
/// Convention used throughout the library: rotations act on column vectors,
/// and composition `a * b` applies `b` first, `a` second, both expressed in
/// the world frame (left multiplication).
class Rotation {
 public:
  static constexpr double kOrthoTol = 1e-9;

  Rotation() : m_(Eigen::Matrix3d::Identity()) {}

  /// Validates orthonormality and det(+1) within kOrthoTol.
  static Rotation fromMatrix(const Eigen::Matrix3d& m);

  /// Skips validation; caller guarantees the invariants.
  static Rotation fromMatrixUnchecked(const Eigen::Matrix3d& m) { return Rotation(m); }

  /// Rodrigues construction. `axis` must be unit-norm within 1e-9, else NonUnitAxis.
  static Rotation aboutAxis(const Eigen::Vector3d& axis, double angle_rad);

  static Rotation identity() { return Rotation(); }

  const Eigen::Matrix3d& matrix() const { return m_; }

  Rotation operator*(const Rotation& rhs) const {
    return Rotation(Eigen::Matrix3d(m_ * rhs.m_));
  }
  Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return m_ * v; }

  Rotation inverse() const { return Rotation(Eigen::Matrix3d(m_.transpose())); }

  /// Unit quaternion as (w, x, y, z), w >= 0.
  Eigen::Vector4d quaternionWxyz() const;

  /// Axis-angle vector (angle * unit axis) of this rotation.
  Eigen::Vector3d axisAngle() const;

  static bool isOrthonormal(const Eigen::Matrix3d& m, double tol = kOrthoTol);

 private:
  explicit Rotation(const Eigen::Matrix3d& m) : m_(m) {}
  Eigen::Matrix3d m_;
};

/// Rigid transform: x_parent = rotation * x_local + translation. Meters.
struct Pose {
  Rotation rotation;
  Eigen::Vector3d translation{Eigen::Vector3d::Zero()};

  static Pose identity() { return Pose{}; }
  static Pose fromTranslation(const Eigen::Vector3d& t) { return Pose{Rotation(), t}; }

  Pose operator*(const Pose& rhs) const {
    return Pose{rotation * rhs.rotation, rotation * rhs.translation + translation};
  }
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }
  Pose inverse() const {
    Rotation rt = rotation.inverse();
    return Pose{rt, -(rt * translation)};
  }
};

/// Continuous 6D rotation encoding: first two rotation-matrix columns,
/// flattened column-major (c0x, c0y, c0z, c1x, c1y, c1z).
using Rep6d = Eigen::Matrix<double, 6, 1>;

Rep6d rotationToRep6(const Rotation& r);

/// Gram-Schmidt decode. Throws DegenerateInput if either embedded vector has
/// norm < 1e-9 or the two are parallel within 1e-9.
Rotation rep6ToRotation(const Rep6d& v);

/// Force/moment pair. `frame` names the frame the components are expressed in
/// ("world" or "ee" in this library).
struct Wrench {
  Eigen::Vector3d force{Eigen::Vector3d::Zero()};   // N
  Eigen::Vector3d moment{Eigen::Vector3d::Zero()};  // Nm
  std::string frame{"world"};
};

inline double degToRad(double deg) { return deg * M_PI / 180.0; }
inline double radToDeg(double rad) { return rad * 180.0 / M_PI; }

}  // namespace wristkit
