#include "wristkit/collision.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace wristkit {

namespace {

// Squared distance from point p to the solid AABB [-h, h].
double pointAabbSquared(const Eigen::Vector3d& p, const Eigen::Vector3d& h) {
  double d2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double excess = std::abs(p[i]) - h[i];
    if (excess > 0.0) d2 += excess * excess;
  }
  return d2;
}

// Interior depth of point p in the AABB (positive inside, negative outside).
double pointAabbDepth(const Eigen::Vector3d& p, const Eigen::Vector3d& h) {
  double depth = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) depth = std::min(depth, h[i] - std::abs(p[i]));
  return depth;
}

// Distance from the segment a + t(b-a), t in [0,1], to the solid AABB
// [-h, h]; 0 if they intersect. The squared distance is piecewise quadratic
// in t with breakpoints where a coordinate crosses a slab plane, so the exact
// minimum is found per subinterval.
double segmentAabbDistance(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                           const Eigen::Vector3d& h) {
  const Eigen::Vector3d d = b - a;
  std::vector<double> knots{0.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-15) continue;
    for (double plane : {-h[i], h[i]}) {
      const double t = (plane - a[i]) / d[i];
      if (t > 0.0 && t < 1.0) knots.push_back(t);
    }
  }
  std::sort(knots.begin(), knots.end());

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double t0 = knots[k], t1 = knots[k + 1];
    if (t1 - t0 < 1e-15) continue;
    const double tm = 0.5 * (t0 + t1);
    const Eigen::Vector3d pm = a + tm * d;
    // Active excess coordinates are fixed on this subinterval; the squared
    // distance is sum_i (s_i*(a_i + t d_i) - h_i)^2 over active axes.
    double qa = 0.0, qb = 0.0, qc = 0.0;  // qa t^2 + qb t + qc
    for (int i = 0; i < 3; ++i) {
      double s = 0.0;
      if (pm[i] > h[i]) s = 1.0;
      else if (pm[i] < -h[i]) s = -1.0;
      if (s == 0.0) continue;
      const double c0 = s * a[i] - h[i];
      const double c1 = s * d[i];
      qa += c1 * c1;
      qb += 2.0 * c0 * c1;
      qc += c0 * c0;
    }
    double value;
    if (qa < 1e-30) {
      value = qc;
    } else {
      const double t_star = std::clamp(-qb / (2.0 * qa), t0, t1);
      value = qa * t_star * t_star + qb * t_star + qc;
    }
    best = std::min(best, value);
  }
  // Guard against sign-pattern edge cases at knot boundaries.
  best = std::min(best, std::min(pointAabbSquared(a, h), pointAabbSquared(b, h)));
  return best <= 0.0 ? 0.0 : std::sqrt(best);
}

// Deepest interior penetration of the segment in the AABB; -inf if the
// segment never enters. depth(t) = min_i (h_i - |p_i(t)|) is piecewise linear
// between coordinate sign changes and slab crossings; within a subinterval
// the max of a concave piecewise-linear function sits at an endpoint or at a
// pairwise crossing of the linear pieces.
double segmentAabbMaxDepth(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                           const Eigen::Vector3d& h) {
  const Eigen::Vector3d d = b - a;
  std::vector<double> knots{0.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-15) continue;
    for (double plane : {-h[i], 0.0, h[i]}) {
      const double t = (plane - a[i]) / d[i];
      if (t > 0.0 && t < 1.0) knots.push_back(t);
    }
  }
  std::sort(knots.begin(), knots.end());

  double best = -std::numeric_limits<double>::infinity();
  auto depthAt = [&](double t) { return pointAabbDepth(a + t * d, h); };
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double t0 = knots[k], t1 = knots[k + 1];
    best = std::max(best, std::max(depthAt(t0), depthAt(t1)));
    // Linear pieces on this subinterval: f_i(t) = h_i - s_i (a_i + t d_i).
    const double tm = 0.5 * (t0 + t1);
    const Eigen::Vector3d pm = a + tm * d;
    double c0[3], c1[3];
    for (int i = 0; i < 3; ++i) {
      const double s = pm[i] >= 0.0 ? 1.0 : -1.0;
      c0[i] = h[i] - s * a[i];
      c1[i] = -s * d[i];
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const double denom = c1[i] - c1[j];
        if (std::abs(denom) < 1e-15) continue;
        const double t = (c0[j] - c0[i]) / denom;
        if (t > t0 && t < t1) best = std::max(best, depthAt(t));
      }
    }
  }
  return best;
}

}  // namespace

double capsuleBoxDistance(const Capsule& capsule, const ObstacleBox& box) {
  // Work in the box frame.
  const Pose inv = box.pose.inverse();
  const Eigen::Vector3d a = inv * capsule.a;
  const Eigen::Vector3d b = inv * capsule.b;
  const double seg_dist = segmentAabbDistance(a, b, box.half_extents);
  if (seg_dist > 0.0) return seg_dist - capsule.radius;
  const double depth = std::max(0.0, segmentAabbMaxDepth(a, b, box.half_extents));
  return -(capsule.radius + depth);
}

double segmentSegmentDistance(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                              const Eigen::Vector3d& q0, const Eigen::Vector3d& q1) {
  // Standard closest-point parameterization (Ericson, Real-Time Collision
  // Detection, 5.1.9).
  const Eigen::Vector3d d1 = p1 - p0;
  const Eigen::Vector3d d2 = q1 - q0;
  const Eigen::Vector3d r = p0 - q0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0, t = 0.0;
  constexpr double kEps = 1e-15;
  if (a <= kEps && e <= kEps) {
    return r.norm();
  }
  if (a <= kEps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kEps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      if (denom > kEps) {
        s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      }
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

double capsuleCapsuleDistance(const Capsule& a, const Capsule& b) {
  return segmentSegmentDistance(a.a, a.b, b.a, b.b) - a.radius - b.radius;
}

}  // namespace wristkit
