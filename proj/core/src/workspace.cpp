#include "wristkit/workspace.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace wristkit {

void Scene::validate() const {
  for (const auto& o : obstacles) {
    if ((o.half_extents.array() <= 0.0).any()) {
      throw Error(ErrorCode::InvalidModel, "obstacle '" + o.name + "' has non-positive extent");
    }
  }
  if ((region_max.array() <= region_min.array()).any()) {
    throw Error(ErrorCode::InvalidModel, "interior region is degenerate");
  }
  if (collision_margin < 0.0) {
    throw Error(ErrorCode::InvalidModel, "collision margin must be >= 0");
  }
}

Scene sceneFromJson(const Json& j) {
  Scene scene;
  if (j.contains("obstacles")) {
    for (const auto& o : j.at("obstacles")) {
      ObstacleBox box;
      box.name = o.value("name", std::string("obstacle"));
      box.pose = poseFromJson(o.at("pose"));
      box.half_extents = vec3FromJson(o.at("half_extents"));
      scene.obstacles.push_back(box);
    }
  }
  if (j.contains("base_pose")) scene.base_pose = poseFromJson(j.at("base_pose"));
  const auto& region = j.at("interior_region");
  scene.region_min = vec3FromJson(region.at("min"));
  scene.region_max = vec3FromJson(region.at("max"));
  if (j.contains("collision_margin_m")) {
    scene.collision_margin = j.at("collision_margin_m").get<double>();
  }
  scene.validate();
  return scene;
}

Scene loadScene(const std::string& path) { return sceneFromJson(loadJsonFile(path)); }

void GridSpec::validate() const {
  if (nx < 2 || ny < 2 || nz < 2) {
    throw Error(ErrorCode::InvalidModel, "grid needs at least 2 points per axis");
  }
}

Eigen::Vector3d GridSpec::spacing(const Scene& scene) const {
  const Eigen::Vector3d span = scene.region_max - scene.region_min;
  return {span.x() / (nx - 1), span.y() / (ny - 1), span.z() / (nz - 1)};
}

Eigen::Vector3d GridSpec::point(const Scene& scene, int ix, int iy, int iz) const {
  const Eigen::Vector3d s = spacing(scene);
  return scene.region_min + Eigen::Vector3d(ix * s.x(), iy * s.y(), iz * s.z());
}

const char* pointStatusName(PointStatus s) {
  switch (s) {
    case PointStatus::Reachable: return "reachable";
    case PointStatus::IkFailure: return "ik-failure";
    case PointStatus::Collision: return "collision";
    case PointStatus::SelfCollision: return "self-collision";
  }
  return "unknown";
}

void ReachabilityResult::recount() {
  reachable = ik_failure = collision = self_collision = 0;
  for (PointStatus s : statuses) {
    switch (s) {
      case PointStatus::Reachable: ++reachable; break;
      case PointStatus::IkFailure: ++ik_failure; break;
      case PointStatus::Collision: ++collision; break;
      case PointStatus::SelfCollision: ++self_collision; break;
    }
  }
}

CollisionQuery configurationInCollision(const RobotModel& model, const JointConfig& q,
                                        const Scene& scene) {
  const FkResult fk = forwardKinematics(model, q);
  struct WorldCapsule {
    Capsule c;
    int frame_index;
    const std::string* frame;
  };
  std::vector<WorldCapsule> world;
  world.reserve(model.capsules.size());
  for (const auto& cap : model.capsules) {
    const Pose p = scene.base_pose * fk.frames[cap.frame_index];
    world.push_back({{p * cap.a, p * cap.b, cap.radius}, cap.frame_index, &cap.frame});
  }

  CollisionQuery query;
  for (const auto& wc : world) {
    for (const auto& obs : scene.obstacles) {
      if (capsuleBoxDistance(wc.c, obs) <= scene.collision_margin) {
        query.in_collision = true;
        query.first = *wc.frame;
        query.second = obs.name;
        return query;
      }
    }
  }
  for (std::size_t i = 0; i < world.size(); ++i) {
    for (std::size_t k = i + 1; k < world.size(); ++k) {
      if (std::abs(world[i].frame_index - world[k].frame_index) <= 1) continue;
      if (model.selfCollisionIgnored(world[i].frame_index, world[k].frame_index)) continue;
      if (capsuleCapsuleDistance(world[i].c, world[k].c) <= 0.0) {
        query.in_collision = true;
        query.self_collision = true;
        query.first = *world[i].frame;
        query.second = *world[k].frame;
        return query;
      }
    }
  }
  return query;
}

namespace {

double maxReach(const RobotModel& model) {
  double reach = 0.0;
  for (const auto& j : model.base_joints) reach += j.origin.translation.norm();
  if (model.hasPkmWrist()) {
    reach += model.pkmWrist().pivot.translation.norm();
  } else {
    for (const auto& j : std::get<SerialWristModel>(model.wrist).joints) {
      reach += j.origin.translation.norm();
    }
  }
  reach += model.tool.translation.norm();
  return reach;
}

std::vector<JointConfig> ikSeeds(const RobotModel& model, const ReachabilityConfig& cfg,
                                 std::uint64_t point_key) {
  const Eigen::VectorXd lo = model.lowerLimits();
  const Eigen::VectorXd hi = model.upperLimits();
  const JointConfig mid = model.midConfig();
  const Eigen::VectorXd half = 0.5 * (hi - lo);
  const int n = model.dof();

  // Fixed spread over the wrist DOFs (last two) plus elbow/shoulder bends so
  // no seed sits at the stretched-out singularity.
  static constexpr double kWrist[8][2] = {
      {0.0, 0.0},  {0.6, 0.6},  {-0.6, 0.6}, {0.6, -0.6},
      {-0.6, -0.6}, {0.6, 0.0}, {0.0, 0.6},  {0.0, -0.6},
  };
  static constexpr double kElbow[8] = {0.3, 0.3, 0.3, 0.3, 0.3, 0.7, -0.3, 0.7};
  static constexpr double kShoulder[8] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.4, -0.4, 0.2};

  std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + point_key);
  std::uniform_real_distribution<double> dither(-0.01, 0.01);

  std::vector<JointConfig> seeds;
  const int count = std::min(cfg.seeds, 8);
  seeds.reserve(count);
  for (int s = 0; s < count; ++s) {
    JointConfig q = mid;
    if (n >= 2) {
      q[n - 2] += kWrist[s][0] * half[n - 2];
      q[n - 1] += kWrist[s][1] * half[n - 1];
    }
    if (n >= 5) {
      q[1] += kShoulder[s] * half[1];
      q[2] += kElbow[s] * half[2];
    }
    for (int i = 0; i < n; ++i) {
      q[i] = std::clamp(q[i] + dither(rng), lo[i], hi[i]);
    }
    seeds.push_back(q);
  }
  return seeds;
}

}  // namespace

PointStatus pointReachable(const RobotModel& model, const Scene& scene,
                           const Eigen::Vector3d& target, const ReachabilityConfig& cfg) {
  if (!target.allFinite()) {
    throw Error(ErrorCode::DegenerateInput, "target point must be finite");
  }
  const Eigen::Vector3d target_base = scene.base_pose.inverse() * target;
  if (target_base.norm() > maxReach(model)) return PointStatus::IkFailure;

  DiffIKConfig ik = cfg.ik.positionOnlyVariant();
  ik.position_tolerance = cfg.position_tolerance;
  ik.max_iterations = cfg.max_iterations;

  Pose goal;
  goal.translation = target_base;

  // Stable key so the dither depends on the point, not the thread schedule.
  std::uint64_t key = 0;
  for (double v : {target.x(), target.y(), target.z()}) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    key = key * 0x100000001b3ULL + bits;
  }

  bool any_converged = false;
  PointStatus collision_status = PointStatus::Collision;
  for (const JointConfig& seed : ikSeeds(model, cfg, key)) {
    const IKResult res = solvePoseIk(model, seed, goal, ik);
    if (!res.converged) continue;
    const CollisionQuery col = configurationInCollision(model, res.solution, scene);
    if (!col.in_collision) return PointStatus::Reachable;
    if (!any_converged) {
      collision_status = col.self_collision ? PointStatus::SelfCollision : PointStatus::Collision;
      any_converged = true;
    }
  }
  return any_converged ? collision_status : PointStatus::IkFailure;
}

ReachabilityResult reachabilityGrid(const RobotModel& model, const Scene& scene,
                                    const GridSpec& grid, const ReachabilityConfig& cfg,
                                    int threads) {
  grid.validate();
  scene.validate();
  ReachabilityResult result;
  result.robot = model.name;
  result.grid = grid;
  result.region_min = scene.region_min;
  result.region_max = scene.region_max;
  result.statuses.assign(grid.total(), PointStatus::IkFailure);

  const int total = grid.total();
  int nthreads = threads > 0 ? threads
                             : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nthreads = std::min(nthreads, total);

  std::atomic<int> cursor{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    try {
      int idx;
      while ((idx = cursor.fetch_add(1)) < total && !failed.load()) {
        const int ix = idx % grid.nx;
        const int iy = (idx / grid.nx) % grid.ny;
        const int iz = idx / (grid.nx * grid.ny);
        const Eigen::Vector3d p = grid.point(scene, ix, iy, iz);
        result.statuses[idx] = pointReachable(model, scene, p, cfg);
      }
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(error_mutex);
      failed.store(true);
      if (error_message.empty()) error_message = e.what();
    }
  };

  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) {
    throw Error(ErrorCode::InvalidModel, "grid evaluation failed: " + error_message);
  }
  result.recount();
  return result;
}

WorkspaceComparison compareWorkspaces(const ReachabilityResult& a,
                                      const ReachabilityResult& b) {
  if (a.grid.nx != b.grid.nx || a.grid.ny != b.grid.ny || a.grid.nz != b.grid.nz ||
      a.region_min != b.region_min || a.region_max != b.region_max) {
    throw Error(ErrorCode::GridMismatch, "results cover different grids or regions");
  }
  WorkspaceComparison cmp;
  cmp.count_a = a.reachable;
  cmp.count_b = b.reachable;
  if (a.reachable == 0) {
    cmp.improvement_pct = b.reachable == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    cmp.improvement_pct = 100.0 * (b.reachable - a.reachable) / static_cast<double>(a.reachable);
  }
  cmp.diff.resize(a.statuses.size());
  for (std::size_t i = 0; i < a.statuses.size(); ++i) {
    const bool ra = a.statuses[i] == PointStatus::Reachable;
    const bool rb = b.statuses[i] == PointStatus::Reachable;
    cmp.diff[i] = static_cast<std::int8_t>(rb - ra);
  }
  return cmp;
}

namespace {

char statusChar(PointStatus s) {
  switch (s) {
    case PointStatus::Reachable: return 'R';
    case PointStatus::IkFailure: return 'F';
    case PointStatus::Collision: return 'C';
    case PointStatus::SelfCollision: return 'S';
  }
  return '?';
}

PointStatus statusFromChar(char c) {
  switch (c) {
    case 'R': return PointStatus::Reachable;
    case 'F': return PointStatus::IkFailure;
    case 'C': return PointStatus::Collision;
    case 'S': return PointStatus::SelfCollision;
  }
  throw Error(ErrorCode::ParseError, std::string("unknown status char '") + c + "'");
}

}  // namespace

Json reachabilityToJson(const ReachabilityResult& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["robot"] = r.robot;
  j["grid"] = {{"nx", r.grid.nx}, {"ny", r.grid.ny}, {"nz", r.grid.nz}};
  j["region"] = {{"min", vec3ToJson(r.region_min)}, {"max", vec3ToJson(r.region_max)}};
  j["counts"] = {{"total", r.grid.total()},
                 {"reachable", r.reachable},
                 {"ik_failure", r.ik_failure},
                 {"collision", r.collision},
                 {"self_collision", r.self_collision}};
  std::string statuses;
  statuses.reserve(r.statuses.size());
  for (PointStatus s : r.statuses) statuses.push_back(statusChar(s));
  j["statuses"] = statuses;
  return j;
}

ReachabilityResult reachabilityFromJson(const Json& j) {
  ReachabilityResult r;
  r.robot = j.at("robot").get<std::string>();
  r.grid.nx = j.at("grid").at("nx").get<int>();
  r.grid.ny = j.at("grid").at("ny").get<int>();
  r.grid.nz = j.at("grid").at("nz").get<int>();
  r.region_min = vec3FromJson(j.at("region").at("min"));
  r.region_max = vec3FromJson(j.at("region").at("max"));
  const std::string statuses = j.at("statuses").get<std::string>();
  if (static_cast<int>(statuses.size()) != r.grid.total()) {
    throw Error(ErrorCode::ParseError, "status string does not match grid size");
  }
  r.statuses.reserve(statuses.size());
  for (char c : statuses) r.statuses.push_back(statusFromChar(c));
  r.recount();
  return r;
}

Json comparisonToJson(const WorkspaceComparison& c, const ReachabilityResult& a,
                      const ReachabilityResult& b) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["robot_a"] = a.robot;
  j["robot_b"] = b.robot;
  j["reachable_a"] = c.count_a;
  j["reachable_b"] = c.count_b;
  if (std::isfinite(c.improvement_pct)) {
    j["improvement_pct"] = c.improvement_pct;
  } else {
    j["improvement_pct"] = nullptr;
  }
  int gained = 0, lost = 0;
  std::string diff;
  diff.reserve(c.diff.size());
  for (std::int8_t d : c.diff) {
    if (d > 0) { ++gained; diff.push_back('+'); }
    else if (d < 0) { ++lost; diff.push_back('-'); }
    else diff.push_back('=');
  }
  j["gained"] = gained;
  j["lost"] = lost;
  j["diff"] = diff;
  return j;
}

std::vector<std::string> writeHeatmapSlices(const ReachabilityResult& r,
                                            const std::string& path) {
  std::string stem = path;
  std::string ext = ".ppm";
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && dot > path.rfind('/') + 1) {
    stem = path.substr(0, dot);
    ext = path.substr(dot);
  }
  std::vector<std::string> written;
  for (int iz = 0; iz < r.grid.nz; ++iz) {
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "_z%02d", iz);
    const std::string file = stem + suffix + ext;
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + file + "'");
    out << "P6\n" << r.grid.nx << " " << r.grid.ny << "\n255\n";
    for (int row = 0; row < r.grid.ny; ++row) {
      const int iy = r.grid.ny - 1 - row;
      for (int ix = 0; ix < r.grid.nx; ++ix) {
        unsigned char rgb[3];
        switch (r.statuses[r.grid.index(ix, iy, iz)]) {
          case PointStatus::Reachable: rgb[0] = 0; rgb[1] = 255; rgb[2] = 0; break;
          case PointStatus::Collision: rgb[0] = 255; rgb[1] = 0; rgb[2] = 0; break;
          case PointStatus::SelfCollision: rgb[0] = 255; rgb[1] = 128; rgb[2] = 0; break;
          case PointStatus::IkFailure:
          default: rgb[0] = 128; rgb[1] = 128; rgb[2] = 128; break;
        }
        out.write(reinterpret_cast<const char*>(rgb), 3);
      }
    }
    written.push_back(file);
  }
  return written;
}

}  // namespace wristkit
