#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wristkit/collision.hpp"
#include "wristkit/diffik.hpp"
#include "wristkit/json_io.hpp"

namespace wristkit {

struct Scene {
  std::vector<ObstacleBox> obstacles;
  Pose base_pose;  // robot base in world frame
  // Axis-aligned world-frame box the target grid spans.
  Eigen::Vector3d region_min{Eigen::Vector3d::Zero()};
  Eigen::Vector3d region_max{Eigen::Vector3d::Ones()};
  double collision_margin = 0.005;  // m, obstacle inflation

  void validate() const;  // throws InvalidModel
};

Scene sceneFromJson(const Json& j);
Scene loadScene(const std::string& path);

struct GridSpec {
  int nx = 20, ny = 20, nz = 20;  // counts per axis, each >= 2

  int total() const { return nx * ny * nz; }
  void validate() const;
  /// Canonical index: x fastest, then y, then z.
  int index(int ix, int iy, int iz) const { return (iz * ny + iy) * nx + ix; }
  Eigen::Vector3d point(const Scene& scene, int ix, int iy, int iz) const;
  Eigen::Vector3d spacing(const Scene& scene) const;
};

enum class PointStatus : std::uint8_t {
  Reachable = 0,
  IkFailure = 1,
  Collision = 2,
  SelfCollision = 3,
};
const char* pointStatusName(PointStatus s);

struct ReachabilityResult {
  std::string robot;
  GridSpec grid;
  Eigen::Vector3d region_min, region_max;
  std::vector<PointStatus> statuses;  // canonical grid order
  int reachable = 0, ik_failure = 0, collision = 0, self_collision = 0;

  void recount();
};

struct CollisionQuery {
  bool in_collision = false;
  bool self_collision = false;
  std::string first;   // offending pair, empty when collision-free
  std::string second;
};

/// Collision state of a configuration: any link capsule against any (inflated)
/// obstacle, and any non-adjacent link capsule pair against each other.
CollisionQuery configurationInCollision(const RobotModel& model, const JointConfig& q,
                                        const Scene& scene);

struct ReachabilityConfig {
  ReachabilityConfig() { ik.control_period = 0.1; }  // coarse IK step, not 1 kHz

  DiffIKConfig ik;              // angular weights are zeroed internally
  int seeds = 8;                // deterministic wrist-spread seeds
  std::uint64_t seed = 0;       // dithers the IK seeds, reproducibly
  double position_tolerance = 1e-4;  // m, reachability convergence bar
  int max_iterations = 60;
};

/// Classifies one world-frame target point: reachable iff some seed converges
/// to a collision-free configuration. Deterministic for fixed config.
PointStatus pointReachable(const RobotModel& model, const Scene& scene,
                           const Eigen::Vector3d& target, const ReachabilityConfig& cfg);

/// Evaluates pointReachable over the whole grid. `threads` <= 0 uses hardware
/// concurrency. Results are written in canonical grid order, independent of
/// the evaluation schedule.
ReachabilityResult reachabilityGrid(const RobotModel& model, const Scene& scene,
                                    const GridSpec& grid, const ReachabilityConfig& cfg,
                                    int threads = 0);

struct WorkspaceComparison {
  int count_a = 0, count_b = 0;
  double improvement_pct = 0.0;  // (count_b - count_a) / count_a * 100
  std::vector<std::int8_t> diff;  // per point: 0 same, +1 gained in b, -1 lost in b
};

/// Throws GridMismatch unless both results share the grid and region.
WorkspaceComparison compareWorkspaces(const ReachabilityResult& a,
                                      const ReachabilityResult& b);

Json reachabilityToJson(const ReachabilityResult& r);
ReachabilityResult reachabilityFromJson(const Json& j);
Json comparisonToJson(const WorkspaceComparison& c, const ReachabilityResult& a,
                      const ReachabilityResult& b);

/// Writes one PPM (P6) image per z slice: `prefix_z<k>.ppm`. Pixel (column,
/// row) = (ix, ny-1-iy); reachable (0,255,0), collision (255,0,0),
/// self-collision (255,128,0), ik-failure (128,128,128). Returns the paths.
std::vector<std::string> writeHeatmapSlices(const ReachabilityResult& r,
                                            const std::string& path);

}  // namespace wristkit
