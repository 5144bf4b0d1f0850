#include "scenecheck/checks.hpp"

#include "scenecheck/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace scenecheck {

namespace {

std::string format_distance(double meters) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", meters);
  return buf;
}

std::string format_percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", ratio * 100.0);
  return buf;
}

struct ReachAttempt {
  double distance = 0.0;
  bool via_crouch = false;
};

struct ReachEvaluation {
  bool status = false;
  double distance = 0.0;  // passing distance, or the best attempt on failure
  bool via_crouch = false;
};

template <typename TargetT>
ReachEvaluation evaluate_reach(const PointCloud3& floor_points,
                               const TargetT& target,
                               const AgentProfile& profile, Posture posture) {
  if (floor_points.empty())
    throw ArgumentError("check_reachable: empty floor point set");

  const EffectiveHeights heights = effective_heights(profile, posture);
  const ReachAttempt attempts[2] = {{heights.shoulder, false},
                                    {heights.crouch, true}};

  ReachEvaluation eval;
  double best = std::numeric_limits<double>::max();
  for (const ReachAttempt& attempt : attempts) {
    const Vec3 offset(0.0, -attempt.distance, 0.0);
    double d;
    if constexpr (std::is_same_v<TargetT, TriangleMesh>) {
      d = min_distance_points_to_mesh(floor_points,
                                      translate_mesh(target, offset)).distance;
    } else {
      d = min_distance_points_to_points(floor_points,
                                        translate_points(target, offset)).distance;
    }
    if (d <= profile.reach_radius) {
      eval.status = true;
      eval.distance = d;
      eval.via_crouch = attempt.via_crouch;
      return eval;
    }
    best = std::min(best, d);
  }
  eval.status = false;
  eval.distance = best;
  eval.via_crouch = false;
  return eval;
}

CheckOutcome reach_outcome(const ReachEvaluation& eval,
                           const AgentProfile& profile, bool interactable) {
  CheckOutcome outcome;
  outcome.property =
      interactable ? PropertyKind::interactable : PropertyKind::reachable;
  outcome.status = eval.status;

  const std::string required = format_distance(eval.distance);
  const std::string reach = format_distance(profile.reach_radius);
  const char* subject = interactable ? "Interactable volume" : "Object";
  if (eval.status) {
    outcome.message = std::string(subject) +
                      (eval.via_crouch ? " is reachable (via crouching)."
                                       : " is reachable.") +
                      " Required distance: " + required + "m, Agent's reach: " +
                      reach + "m.";
  } else {
    outcome.message = std::string(subject) + " not reachable." +
                      " Required distance: " + required +
                      "m, exceeds Agent's reach: " + reach + "m.";
  }
  outcome.metrics["required_distance_m"] = eval.distance;
  outcome.metrics["reach_m"] = profile.reach_radius;
  outcome.metrics["via_crouch"] = eval.via_crouch;
  return outcome;
}

}  // namespace

ClearanceBox make_clearance_box(const OrientedBox& target, BoxFace face) {
  const double width_x = 2.0 * target.half_extents.x();
  const double width_z = 2.0 * target.half_extents.z();
  const double depth = std::min(width_x, width_z);

  const Eigen::Matrix3d rot = target.rotation();
  Vec3 normal;       // world outward normal of the chosen face
  Vec3 half_extents; // clearance volume half sizes in the box frame
  double face_offset;
  switch (face) {
    case BoxFace::front:
      normal = rot.col(2);
      face_offset = target.half_extents.z();
      half_extents = Vec3(target.half_extents.x(), target.half_extents.y(),
                          depth / 2.0);
      break;
    case BoxFace::back:
      normal = -rot.col(2);
      face_offset = target.half_extents.z();
      half_extents = Vec3(target.half_extents.x(), target.half_extents.y(),
                          depth / 2.0);
      break;
    case BoxFace::right:
      normal = rot.col(0);
      face_offset = target.half_extents.x();
      half_extents = Vec3(depth / 2.0, target.half_extents.y(),
                          target.half_extents.z());
      break;
    case BoxFace::left:
    default:
      normal = -rot.col(0);
      face_offset = target.half_extents.x();
      half_extents = Vec3(depth / 2.0, target.half_extents.y(),
                          target.half_extents.z());
      break;
  }

  ClearanceBox cb;
  cb.zone_face = face;
  cb.box.center = target.center + normal * (face_offset + depth / 2.0);
  cb.box.half_extents = half_extents;
  cb.box.yaw = target.yaw;
  return cb;
}

std::vector<InteractionZone> WalkableOverlapResolver::resolve(
    const SceneObject& object, AtomicAction /*action*/,
    const NavMap& map) const {
  std::vector<InteractionZone> zones;
  for (const InteractionZone& zone : face_zones(object.obb, depth_, flare_)) {
    const auto pixels =
        rasterize_convex_polygon(map, zone.polygon.data(), zone.polygon.size());
    const bool overlaps_walkable =
        std::any_of(pixels.begin(), pixels.end(), [&map](const GridIndex& px) {
          return map.grid(px.row, px.col) != 0;
        });
    if (overlaps_walkable) zones.push_back(zone);
  }
  return zones;
}

std::vector<InteractionZone> AnnotationResolver::resolve(
    const SceneObject& object, AtomicAction action, const NavMap& map) const {
  const auto it = table_.find({object.category, std::string(to_string(action))});
  if (it == table_.end()) return fallback_.resolve(object, action, map);

  const std::vector<InteractionZone> all = face_zones(object.obb, depth_, flare_);
  std::vector<InteractionZone> zones;
  for (const BoxFace face : it->second) {
    for (const InteractionZone& zone : all) {
      if (zone.face == face) zones.push_back(zone);
    }
  }
  return zones;
}

PointCloud3 surface_samples(const TriangleMesh& mesh) {
  PointCloud3 cloud;
  cloud.points = mesh.vertices;
  cloud.points.reserve(mesh.vertices.size() + mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    cloud.points.push_back((mesh.vertices[tri[0]] + mesh.vertices[tri[1]] +
                            mesh.vertices[tri[2]]) /
                           3.0);
  }
  return cloud;
}

PointCloud3 surface_samples_area_weighted(const TriangleMesh& mesh,
                                          std::uint64_t seed) {
  PointCloud3 cloud;
  if (mesh.empty()) return cloud;

  std::vector<double> cumulative;
  cumulative.reserve(mesh.triangles.size());
  double total = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3 e0 = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    const Vec3 e1 = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    total += 0.5 * e0.cross(e1).norm();
    cumulative.push_back(total);
  }
  if (total <= 0.0) return cloud;

  Rng rng = Rng(seed).split(0x5a3d);
  const std::size_t count = 2 * mesh.triangles.size();
  for (std::size_t i = 0; i < count; ++i) {
    const double pick = rng.uniform() * total;
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), pick);
    const std::size_t t = static_cast<std::size_t>(it - cumulative.begin());
    const auto& tri = mesh.triangles[std::min(t, mesh.triangles.size() - 1)];
    double u = rng.uniform();
    double v = rng.uniform();
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    cloud.points.push_back(mesh.vertices[tri[0]] +
                           u * (mesh.vertices[tri[1]] - mesh.vertices[tri[0]]) +
                           v * (mesh.vertices[tri[2]] - mesh.vertices[tri[0]]));
  }
  return cloud;
}

PointCloud3 FullMeshProvider::functional_part(const SceneObject& object,
                                              AtomicAction /*action*/) const {
  const TriangleMesh mesh = object.geometry();
  return area_weighted_ ? surface_samples_area_weighted(mesh, seed_)
                        : surface_samples(mesh);
}

PointCloud3 FixturePartProvider::functional_part(const SceneObject& object,
                                                 AtomicAction action) const {
  const auto it = table_.find({object.id, std::string(to_string(action))});
  if (it == table_.end()) return {};
  return it->second;
}

NavigableResult check_navigable(const NavMap& map, const AgentPose& pose,
                                const std::vector<InteractionZone>& zones,
                                std::uint64_t rng_seed) {
  if (!map.labeled()) throw EngineError("check_navigable: map is not labeled");
  const GridIndex agent_px = map.scene_to_image(pose.position);
  if (!map.in_bounds(agent_px) || map.grid(agent_px.row, agent_px.col) == 0)
    throw EngineError("check_navigable: agent pose is not on a walkable pixel");
  const int agent_area = map.labels(agent_px.row, agent_px.col);

  NavigableResult result;
  result.pose = pose;
  result.outcome.property = PropertyKind::navigable;

  // Rasterize all zones up front: the failure diagnostics need the full set
  // of region labels under the zones.
  std::vector<std::vector<GridIndex>> zone_pixels;
  std::set<int> zone_labels;
  zone_pixels.reserve(zones.size());
  for (const InteractionZone& zone : zones) {
    auto pixels =
        rasterize_convex_polygon(map, zone.polygon.data(), zone.polygon.size());
    for (const GridIndex& px : pixels)
      zone_labels.insert(map.labels(px.row, px.col));
    zone_pixels.push_back(std::move(pixels));
  }

  result.outcome.metrics["agent_area"] = agent_area;
  auto& areas = result.outcome.metrics["target_areas"];
  areas = nlohmann::ordered_json::array();
  for (const int label : zone_labels) areas.push_back(label);

  for (std::size_t z = 0; z < zones.size(); ++z) {
    std::vector<GridIndex> intersection;
    for (const GridIndex& px : zone_pixels[z]) {
      if (map.labels(px.row, px.col) == agent_area) intersection.push_back(px);
    }
    if (intersection.empty()) continue;

    Rng rng = Rng(rng_seed).split(0x7a0e);
    const GridIndex chosen = intersection[rng.bounded(intersection.size())];
    result.pose.position = map.image_to_scene(chosen);
    result.outcome.status = true;
    result.outcome.message =
        "A collision-free path was found to an interaction zone.";
    return result;
  }

  result.outcome.status = false;
  if (zones.empty()) {
    result.outcome.message = "No interaction zones resolved for this step.";
  } else {
    const bool any_walkable_label =
        std::any_of(zone_labels.begin(), zone_labels.end(),
                    [](int label) { return label > 0; });
    if (!any_walkable_label) {
      result.outcome.message = "Target zones are entirely in non-walkable areas.";
    } else {
      std::ostringstream ids;
      bool first = true;
      for (const int label : zone_labels) {
        if (!first) ids << ' ';
        ids << label;
        first = false;
      }
      result.outcome.message =
          "Agent and target zones are in different, disconnected walkable "
          "areas (Agent area: " +
          std::to_string(agent_area) + ", Target areas: [" + ids.str() + "]).";
    }
  }
  return result;
}

CheckOutcome check_reachable(const PointCloud3& floor_points,
                             const TriangleMesh& target,
                             const AgentProfile& profile, Posture posture) {
  if (target.empty()) throw ArgumentError("check_reachable: empty target mesh");
  return reach_outcome(evaluate_reach(floor_points, target, profile, posture),
                       profile, /*interactable=*/false);
}

CheckOutcome check_reachable(const PointCloud3& floor_points,
                             const PointCloud3& target,
                             const AgentProfile& profile, Posture posture) {
  if (target.empty()) throw ArgumentError("check_reachable: empty target cloud");
  return reach_outcome(evaluate_reach(floor_points, target, profile, posture),
                       profile, /*interactable=*/false);
}

CheckOutcome check_interactable(const SceneObject& object, AtomicAction action,
                                const FunctionalPartProvider& provider,
                                const PointCloud3& floor_points,
                                const AgentProfile& profile, Posture posture) {
  const PointCloud3 volume = provider.functional_part(object, action);

  CheckOutcome outcome;
  if (volume.empty()) {
    outcome.property = PropertyKind::interactable;
    outcome.status = false;
    outcome.message = "No functional part identified.";
    outcome.metrics["required_distance_m"] = nullptr;
    outcome.metrics["reach_m"] = profile.reach_radius;
    outcome.metrics["via_crouch"] = false;
    outcome.metrics["point_count"] = 0;
    return outcome;
  }

  outcome = reach_outcome(evaluate_reach(floor_points, volume, profile, posture),
                          profile, /*interactable=*/true);
  outcome.metrics["point_count"] = volume.size();
  return outcome;
}

bool floor_contains(const TriangleMesh& floor, const Vec2& xz) {
  for (const auto& tri : floor.triangles) {
    const Vec3& a = floor.vertices[tri[0]];
    const Vec3& b = floor.vertices[tri[1]];
    const Vec3& c = floor.vertices[tri[2]];
    if (point_in_triangle_2d(xz, Vec2(a.x(), a.z()), Vec2(b.x(), b.z()),
                             Vec2(c.x(), c.z()))) {
      return true;
    }
  }
  return false;
}

CheckOutcome check_clearance(const SceneObject& object,
                             const std::vector<InteractionZone>& zones,
                             const Scene& scene, bool full_containment) {
  std::vector<OrientedBox> obstacles;
  obstacles.reserve(scene.objects.size());
  for (const SceneObject& other : scene.objects) {
    if (other.id != object.id) obstacles.push_back(other.obb);
  }
  std::vector<const TriangleMesh*> wall_meshes;
  wall_meshes.reserve(scene.walls.size());
  for (const TriangleMesh& wall : scene.walls) wall_meshes.push_back(&wall);

  int free_zones = 0;
  for (const InteractionZone& zone : zones) {
    const ClearanceBox cb = make_clearance_box(object.obb, zone.face);
    if (box_intersects(cb.box, obstacles, wall_meshes)) continue;

    bool inside;
    if (full_containment) {
      const auto rect = box_footprint(cb.box);
      inside = std::all_of(rect.begin(), rect.end(), [&](const Vec2& corner) {
        return floor_contains(scene.floor, corner);
      });
    } else {
      inside = floor_contains(scene.floor,
                              Vec2(cb.box.center.x(), cb.box.center.z()));
    }
    if (inside) ++free_zones;
  }

  CheckOutcome outcome;
  outcome.property = PropertyKind::clearance;
  outcome.status = free_zones > 0;
  outcome.message = "Found " + std::to_string(free_zones) +
                    " collision-free interaction zones.";
  outcome.metrics["zone_count"] = free_zones;
  return outcome;
}

std::vector<Vec3> sample_eye_positions(const AgentPose& pose,
                                       const AgentProfile& profile,
                                       const VisibilityConfig& cfg,
                                       std::uint64_t rng_seed, double ground_y) {
  if (cfg.eye_samples < 1)
    throw ArgumentError("visibility: eye_samples must be >= 1");
  const EffectiveHeights heights = effective_heights(profile, pose.posture);
  const double eye_y = ground_y + heights.eye;

  Rng rng = Rng(rng_seed).split(0x3eeb);
  std::vector<Vec3> eyes;
  eyes.reserve(cfg.eye_samples);
  for (int i = 0; i < cfg.eye_samples; ++i) {
    const double radius = cfg.eye_jitter_radius * std::sqrt(rng.uniform());
    const double angle = 2.0 * M_PI * rng.uniform();
    eyes.emplace_back(pose.position.x() + radius * std::cos(angle), eye_y,
                      pose.position.y() + radius * std::sin(angle));
  }
  return eyes;
}

CheckOutcome check_visible(const AgentPose& pose, const AgentProfile& profile,
                           const SceneObject& target, const Scene& scene,
                           const VisibilityConfig& cfg, std::uint64_t rng_seed,
                           double ground_y) {
  if (cfg.threshold <= 0.0 || cfg.threshold >= 1.0)
    throw ArgumentError("visibility: threshold must lie in (0, 1)");

  const std::vector<Vec3> eyes =
      sample_eye_positions(pose, profile, cfg, rng_seed, ground_y);

  std::vector<Vec3> targets;
  targets.reserve(9);
  targets.push_back(target.obb.center);
  const auto corners = box_corners(target.obb);
  targets.insert(targets.end(), corners.begin(), corners.end());

  // Occluders: every other object plus the wall architecture.
  std::vector<TriangleMesh> synthesized;
  std::vector<const TriangleMesh*> occluders;
  for (const SceneObject& other : scene.objects) {
    if (other.id == target.id) continue;
    if (other.mesh.has_value()) {
      occluders.push_back(&*other.mesh);
    } else {
      synthesized.push_back(box_mesh(other.obb));
    }
  }
  for (const TriangleMesh& mesh : synthesized) occluders.push_back(&mesh);
  for (const TriangleMesh& wall : scene.walls) occluders.push_back(&wall);

  int clear = 0;
  bool centroid_visible = false;
  for (const Vec3& eye : eyes) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (!ray_blocked(occluders, eye, targets[k])) {
        ++clear;
        if (k == 0) centroid_visible = true;
      }
    }
  }

  const double ratio =
      static_cast<double>(clear) /
      (static_cast<double>(eyes.size()) * static_cast<double>(targets.size()));

  CheckOutcome outcome;
  outcome.property = PropertyKind::visible;
  outcome.status = ratio > cfg.threshold;
  const std::string centroid_text = centroid_visible ? "Visible" : "Occluded";
  if (outcome.status) {
    outcome.message = "Object is robustly visible (" + format_percent(ratio) +
                      "% clear, Centroid: " + centroid_text + ").";
  } else {
    outcome.message = "Object is not sufficiently visible (" +
                      format_percent(ratio) + "% clear, Centroid: " +
                      centroid_text + ").";
  }
  outcome.metrics["visibility_ratio"] = ratio;
  outcome.metrics["centroid_visible"] = centroid_visible;
  return outcome;
}

std::vector<InteractionZone> resolve_zones(const ZoneResolver& resolver,
                                           const SceneObject& object,
                                           AtomicAction action,
                                           const NavMap& map) {
  return resolver.resolve(object, action, map);
}

}  // namespace scenecheck
