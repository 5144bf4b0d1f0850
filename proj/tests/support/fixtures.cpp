#include "support/fixtures.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace scenecheck::fixtures {

TriangleMesh rect_floor(double width_x, double depth_z, double y) {
  const double hx = width_x / 2.0;
  const double hz = depth_z / 2.0;
  TriangleMesh floor;
  floor.vertices = {{-hx, y, -hz}, {hx, y, -hz}, {hx, y, hz}, {-hx, y, hz}};
  floor.triangles = {{0, 1, 2}, {0, 2, 3}};
  return floor;
}

SceneObject box_object(const std::string& id, const std::string& category,
                       const Vec3& center, const Vec3& size, double yaw) {
  SceneObject object;
  object.id = id;
  object.category = category;
  object.obb.center = center;
  object.obb.half_extents = size / 2.0;
  object.obb.yaw = yaw;
  return object;
}

Scene open_room(const std::string& id) {
  Scene scene;
  scene.id = id;
  scene.floor = rect_floor(5.0, 5.0);
  scene.objects.push_back(box_object("cabinet_01", "cabinet",
                                     {0.0, 0.9, 0.0}, {0.9, 1.8, 0.45}));
  return scene;
}

Scene gap_room(double gap, const std::string& id) {
  Scene scene;
  scene.id = id;
  scene.floor = rect_floor(4.0, 4.0);
  // Divider from the -x wall to within `gap` meters of the +x wall; its
  // center sits at z = +0.5 so the lower region stays strictly larger and
  // the initial pose always lands below it.
  const double span = 4.0 - gap;
  scene.objects.push_back(box_object(
      "divider", "partition",
      {-2.0 + span / 2.0, 0.5, 0.5}, {span, 1.0, 0.2}));
  // Table anchored to the left wall so the upper region stays connected for
  // every profile; only its right-face zone has walkable overlap.
  scene.objects.push_back(box_object("target_table", "table",
                                     {-1.65, 0.4, 1.4}, {0.7, 0.8, 0.6}));
  return scene;
}

Scene shelf_room(const std::string& id) {
  Scene scene;
  scene.id = id;
  scene.floor = rect_floor(5.0, 5.0);
  scene.objects.push_back(box_object("shelf", "wall_shelf",
                                     {0.0, 2.05, 1.8}, {0.8, 0.1, 0.3}));
  return scene;
}

Scene walled_room(const std::string& id) {
  Scene scene;
  scene.id = id;
  scene.floor = rect_floor(4.0, 4.0);
  scene.objects.push_back(box_object("boxed_target", "cabinet",
                                     {0.0, 0.5, 1.3}, {0.8, 1.0, 0.6}));
  // Slab footprint covers every interaction zone of the target.
  scene.objects.push_back(box_object("slab", "clutter",
                                     {0.0, 0.5, 1.1}, {2.8, 1.0, 1.8}));
  return scene;
}

Scene split_room(const std::string& id) {
  Scene scene;
  scene.id = id;
  scene.floor = rect_floor(4.0, 4.0);
  scene.objects.push_back(box_object("divider", "partition",
                                     {0.0, 0.5, 0.5}, {4.0, 1.0, 0.2}));
  scene.objects.push_back(box_object("upper_table", "table",
                                     {0.0, 0.4, 1.4}, {0.8, 0.8, 0.6}));
  return scene;
}

TriangleMesh random_mesh(Rng& rng, int triangle_count, double extent) {
  TriangleMesh mesh;
  for (int t = 0; t < triangle_count; ++t) {
    const Vec3 anchor(rng.uniform(-extent, extent), rng.uniform(-extent, extent),
                      rng.uniform(-extent, extent));
    Vec3 b, c;
    do {
      b = anchor + Vec3(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                        rng.uniform(-1.0, 1.0));
      c = anchor + Vec3(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                        rng.uniform(-1.0, 1.0));
    } while ((b - anchor).cross(c - anchor).norm() < 1e-6);
    const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back(anchor);
    mesh.vertices.push_back(b);
    mesh.vertices.push_back(c);
    mesh.triangles.push_back({base, base + 1, base + 2});
  }
  return mesh;
}

PointCloud3 random_cloud(Rng& rng, int point_count, double extent) {
  PointCloud3 cloud;
  for (int i = 0; i < point_count; ++i) {
    cloud.points.emplace_back(rng.uniform(-extent, extent),
                              rng.uniform(-extent, extent),
                              rng.uniform(-extent, extent));
  }
  return cloud;
}

OrientedBox random_box(Rng& rng, double extent) {
  OrientedBox box;
  box.center = Vec3(rng.uniform(-extent, extent), rng.uniform(-extent, extent),
                    rng.uniform(-extent, extent));
  box.half_extents = Vec3(rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0),
                          rng.uniform(0.1, 1.0));
  box.yaw = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  return box;
}

void write_scene_json(const Scene& scene, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["id"] = scene.id;

  const auto mesh_json = [](const TriangleMesh& mesh) {
    nlohmann::ordered_json spec;
    spec["vertices"] = nlohmann::ordered_json::array();
    for (const Vec3& v : mesh.vertices)
      spec["vertices"].push_back({v.x(), v.y(), v.z()});
    spec["triangles"] = nlohmann::ordered_json::array();
    for (const auto& t : mesh.triangles)
      spec["triangles"].push_back({t[0], t[1], t[2]});
    return spec;
  };

  doc["floor"] = mesh_json(scene.floor);
  if (!scene.walls.empty()) {
    doc["walls"] = nlohmann::ordered_json::array();
    for (const TriangleMesh& wall : scene.walls)
      doc["walls"].push_back(mesh_json(wall));
  }
  doc["objects"] = nlohmann::ordered_json::array();
  for (const SceneObject& object : scene.objects) {
    nlohmann::ordered_json entry;
    entry["id"] = object.id;
    entry["category"] = object.category;
    entry["position"] = {object.obb.center.x(), object.obb.center.y(),
                         object.obb.center.z()};
    entry["yaw"] = object.obb.yaw;
    entry["size"] = {object.obb.half_extents.x() * 2.0,
                     object.obb.half_extents.y() * 2.0,
                     object.obb.half_extents.z() * 2.0};
    doc["objects"].push_back(std::move(entry));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << doc.dump(2) << "\n";
}

void write_plan_json(const Plan& plan, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["agent"] = plan.agent;
  doc["task"] = plan.task;
  doc["steps"] = nlohmann::ordered_json::array();
  for (const PlanStep& step : plan.steps) {
    nlohmann::ordered_json entry;
    entry["action"] = to_string(step.action);
    entry["object_id"] = step.object_id;
    doc["steps"].push_back(std::move(entry));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << doc.dump(2) << "\n";
}

}  // namespace scenecheck::fixtures
