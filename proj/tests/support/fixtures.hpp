#pragma once

// Micro-scene builders shared by the unit and acceptance suites. Outcomes on
// these fixtures are hand-derivable: margins are large relative to the grid
// resolution.

#include "scenecheck/rng.hpp"
#include "scenecheck/scene.hpp"

#include <filesystem>
#include <string>

namespace scenecheck::fixtures {

/// Flat rectangular floor (two triangles) centered at the origin, y = 0.
TriangleMesh rect_floor(double width_x, double depth_z, double y = 0.0);

SceneObject box_object(const std::string& id, const std::string& category,
                       const Vec3& center, const Vec3& size, double yaw = 0.0);

/// Empty room with a single interactable cabinet in the center.
/// Plan shape: navigate_to + open + look_at; feasible for every profile.
Scene open_room(const std::string& id = "open_room");

/// 4x4 m room split by a divider that leaves a `gap`-meter corridor on the
/// +x side. The larger region (agent start) is below the divider; the
/// "target_table" sits in the upper region.
Scene gap_room(double gap, const std::string& id = "gap_room");

/// Room whose "shelf" hangs at 2.0 m (its underside above every profile's
/// head, so it never blocks navigation): reachable for adults only.
Scene shelf_room(const std::string& id = "shelf_room");

/// Room where a slab of obstacles covers all four interaction zones of the
/// "boxed_target" object.
Scene walled_room(const std::string& id = "walled_room");

/// Fully split room (no corridor): agent region 1 below, region 2 above,
/// with "upper_table" placed so its zones touch region 2 and eroded pixels
/// but never region 1. Built for the disconnected-areas diagnostic.
Scene split_room(const std::string& id = "split_room");

TriangleMesh random_mesh(Rng& rng, int triangle_count, double extent);
PointCloud3 random_cloud(Rng& rng, int point_count, double extent);
OrientedBox random_box(Rng& rng, double extent);

/// Serializes a scene to the JSON document format understood by load_scene.
void write_scene_json(const Scene& scene, const std::filesystem::path& path);

void write_plan_json(const Plan& plan, const std::filesystem::path& path);

}  // namespace scenecheck::fixtures
