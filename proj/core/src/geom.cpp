#include "wristkit/geom.hpp"

#include <cmath>

namespace wristkit {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NonUnitAxis: return "NonUnitAxis";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotParallelWrist: return "NotParallelWrist";
    case ErrorCode::ClosureFailure: return "ClosureFailure";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::UnstableSimulation: return "UnstableSimulation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

bool Rotation::isOrthonormal(const Eigen::Matrix3d& m, double tol) {
  const Eigen::Matrix3d gram = m.transpose() * m;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

Rotation Rotation::fromMatrix(const Eigen::Matrix3d& m) {
  if (!isOrthonormal(m)) {
    throw Error(ErrorCode::DegenerateInput, "matrix is not a proper rotation");
  }
  return Rotation(m);
}

Rotation Rotation::aboutAxis(const Eigen::Vector3d& axis, double angle_rad) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::NonUnitAxis, "rotation axis must be unit-norm");
  }
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  Eigen::Matrix3d k;
  k << 0, -axis.z(), axis.y(),
       axis.z(), 0, -axis.x(),
       -axis.y(), axis.x(), 0;
  const Eigen::Matrix3d m =
      Eigen::Matrix3d::Identity() + s * k + (1.0 - c) * (k * k);
  return Rotation(m);
}

Eigen::Vector4d Rotation::quaternionWxyz() const {
  Eigen::Quaterniond q(m_);
  q.normalize();
  if (q.w() < 0) q.coeffs() *= -1.0;
  return {q.w(), q.x(), q.y(), q.z()};
}

Eigen::Vector3d Rotation::axisAngle() const {
  Eigen::AngleAxisd aa(m_);
  return aa.angle() * aa.axis();
}

Rep6d rotationToRep6(const Rotation& r) {
  Rep6d v;
  v.head<3>() = r.matrix().col(0);
  v.tail<3>() = r.matrix().col(1);
  return v;
}

Rotation rep6ToRotation(const Rep6d& v) {
  const Eigen::Vector3d v1 = v.head<3>();
  const Eigen::Vector3d v2 = v.tail<3>();
  constexpr double kTol = 1e-9;
  const double n1 = v1.norm();
  if (n1 < kTol) {
    throw Error(ErrorCode::DegenerateInput, "first 6D column has near-zero norm");
  }
  const Eigen::Vector3d c1 = v1 / n1;
  const Eigen::Vector3d r2 = v2 - c1.dot(v2) * c1;
  const double n2 = r2.norm();
  if (v2.norm() < kTol || n2 < kTol * v2.norm() || n2 < kTol) {
    throw Error(ErrorCode::DegenerateInput, "6D columns are parallel or degenerate");
  }
  const Eigen::Vector3d c2 = r2 / n2;
  const Eigen::Vector3d c3 = c1.cross(c2);
  Eigen::Matrix3d m;
  m.col(0) = c1;
  m.col(1) = c2;
  m.col(2) = c3;
  return Rotation::fromMatrixUnchecked(m);
}

}  // namespace wristkit
