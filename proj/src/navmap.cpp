#include "scenecheck/navmap.hpp"

#include "scenecheck/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace scenecheck {

namespace {

constexpr float kNoFloor = std::numeric_limits<float>::quiet_NaN();

// Stand-in for "no source in this row"; large but finite so the parabola
// envelope arithmetic never produces NaN. Any real squared distance inside
// the grid is far below this.
constexpr double kFarSq = 1e20;

// Squared Euclidean distance transform (Felzenszwalb & Huttenlocher), exact
// on the integer grid. Distances are measured to the nearest zero-valued
// source pixel; the grid border counts as a source so erosion treats
// out-of-bounds space as occupied.
void distance_transform_1d(const std::vector<double>& f, std::vector<double>& d,
                           std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

// Squared distance from every pixel to the nearest occupied (0) pixel or to
// the outside of the grid.
Eigen::MatrixXd occupied_distance_sq(const NavMap::Grid& grid) {
  const int rows = static_cast<int>(grid.rows());
  const int cols = static_cast<int>(grid.cols());

  Eigen::MatrixXd dist(rows, cols);
  std::vector<double> f(cols);
  std::vector<double> d(cols);
  std::vector<int> v(std::max(rows, cols));
  std::vector<double> z(std::max(rows, cols) + 1);

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) f[c] = grid(r, c) ? kFarSq : 0.0;
    distance_transform_1d(f, d, v, z);
    for (int c = 0; c < cols; ++c) dist(r, c) = d[c];
  }
  f.resize(rows);
  d.resize(rows);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) f[r] = dist(r, c);
    distance_transform_1d(f, d, v, z);
    for (int r = 0; r < rows; ++r) dist(r, c) = d[r];
  }

  // Virtual occupied border just outside the grid.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double edge = std::min(std::min(r + 1, rows - r),
                                   std::min(c + 1, cols - c));
      dist(r, c) = std::min(dist(r, c), edge * edge);
    }
  }
  return dist;
}

struct FloorBounds {
  Vec2 lo, hi;
};

FloorBounds floor_bounds(const TriangleMesh& floor) {
  FloorBounds b{Vec2::Constant(std::numeric_limits<double>::max()),
                Vec2::Constant(std::numeric_limits<double>::lowest())};
  for (const Vec3& v : floor.vertices) {
    b.lo = b.lo.cwiseMin(Vec2(v.x(), v.z()));
    b.hi = b.hi.cwiseMax(Vec2(v.x(), v.z()));
  }
  return b;
}

double floor_area_xz(const TriangleMesh& floor) {
  double area = 0.0;
  for (const auto& tri : floor.triangles) {
    const Vec3& a = floor.vertices[tri[0]];
    const Vec3& b = floor.vertices[tri[1]];
    const Vec3& c = floor.vertices[tri[2]];
    area += 0.5 * std::abs((b.x() - a.x()) * (c.z() - a.z()) -
                           (c.x() - a.x()) * (b.z() - a.z()));
  }
  return area;
}

void stamp_convex_polygon(NavMap::Grid& grid, const NavMap& map,
                          const Vec2* polygon, std::size_t count,
                          std::uint8_t value) {
  if (count < 3) return;
  Vec2 lo = polygon[0], hi = polygon[0];
  for (std::size_t i = 1; i < count; ++i) {
    lo = lo.cwiseMin(polygon[i]);
    hi = hi.cwiseMax(polygon[i]);
  }
  const GridIndex start = map.scene_to_image(lo);
  const GridIndex stop = map.scene_to_image(hi);
  const int r0 = std::max(0, start.row);
  const int c0 = std::max(0, start.col);
  const int r1 = std::min<int>(static_cast<int>(grid.rows()) - 1, stop.row);
  const int c1 = std::min<int>(static_cast<int>(grid.cols()) - 1, stop.col);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const Vec2 p = map.image_to_scene({r, c});
      if (point_in_convex_polygon(p, polygon, count)) grid(r, c) = value;
    }
  }
}

}  // namespace

GridIndex NavMap::scene_to_image(const Vec2& xz) const {
  return {static_cast<int>(std::floor((xz.y() - origin.y()) / scale)),
          static_cast<int>(std::floor((xz.x() - origin.x()) / scale))};
}

Vec2 NavMap::image_to_scene(GridIndex idx) const {
  return {origin.x() + scale * (idx.col + 0.5),
          origin.y() + scale * (idx.row + 0.5)};
}

int NavMap::region_count() const {
  if (!labeled()) return 0;
  return labels.size() > 0 ? labels.maxCoeff() : 0;
}

std::size_t NavMap::region_size(int region_id) const {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels.data()[i] == region_id) ++count;
  }
  return count;
}

NavMap build_navmap(const Scene& scene, const AgentProfile& profile,
                    int resolution, bool mesh_silhouettes) {
  if (resolution < 32) throw ArgumentError("navmap resolution must be >= 32");
  if (scene.floor.empty()) throw SceneError("scene '" + scene.id + "': empty floor");
  if (floor_area_xz(scene.floor) <= 1e-9)
    throw SceneError("scene '" + scene.id + "': floor has zero area");

  const FloorBounds bounds = floor_bounds(scene.floor);
  const Vec2 extent = bounds.hi - bounds.lo;
  const double side = std::max(extent.x(), extent.y()) * 1.05;
  const Vec2 mid = 0.5 * (bounds.lo + bounds.hi);

  NavMap map;
  map.resolution = resolution;
  map.scale = side / resolution;
  map.origin = mid - Vec2::Constant(side / 2.0);
  map.agent_name = profile.name;
  map.grid = NavMap::Grid::Zero(resolution, resolution);
  map.floor_y = NavMap::Heights::Constant(resolution, resolution, kNoFloor);

  // Floor triangles mark walkable pixels and record the floor elevation.
  for (const auto& tri : scene.floor.triangles) {
    const Vec3& a3 = scene.floor.vertices[tri[0]];
    const Vec3& b3 = scene.floor.vertices[tri[1]];
    const Vec3& c3 = scene.floor.vertices[tri[2]];
    const Vec2 a(a3.x(), a3.z()), b(b3.x(), b3.z()), c(c3.x(), c3.z());
    Vec2 lo = a.cwiseMin(b).cwiseMin(c);
    Vec2 hi = a.cwiseMax(b).cwiseMax(c);
    const GridIndex start = map.scene_to_image(lo);
    const GridIndex stop = map.scene_to_image(hi);
    for (int r = std::max(0, start.row); r <= std::min(resolution - 1, stop.row); ++r) {
      for (int cidx = std::max(0, start.col); cidx <= std::min(resolution - 1, stop.col); ++cidx) {
        const Vec2 p = map.image_to_scene({r, cidx});
        if (!point_in_triangle_2d(p, a, b, c)) continue;
        map.grid(r, cidx) = 1;
        if (std::isnan(map.floor_y(r, cidx))) {
          // Plane height at p; degenerate XZ projections fall back to a vertex.
          const double det = (b.x() - a.x()) * (c.y() - a.y()) -
                             (c.x() - a.x()) * (b.y() - a.y());
          double y = a3.y();
          if (std::abs(det) > 1e-12) {
            const double w1 = ((p.x() - a.x()) * (c.y() - a.y()) -
                               (c.x() - a.x()) * (p.y() - a.y())) / det;
            const double w2 = ((b.x() - a.x()) * (p.y() - a.y()) -
                               (p.x() - a.x()) * (b.y() - a.y())) / det;
            y = a3.y() + w1 * (b3.y() - a3.y()) + w2 * (c3.y() - a3.y());
          }
          map.floor_y(r, cidx) = static_cast<float>(y);
        }
      }
    }
  }

  // Objects whose underside is at or below the agent's head are obstacles.
  const double height_threshold = profile.total_height();
  for (const SceneObject& object : scene.objects) {
    if (object.obb.min_y() > height_threshold) continue;
    if (mesh_silhouettes && object.mesh.has_value()) {
      const std::vector<Vec2> hull = project_footprint(*object.mesh);
      stamp_convex_polygon(map.grid, map, hull.data(), hull.size(), 0);
    } else {
      const auto rect = box_footprint(object.obb);
      stamp_convex_polygon(map.grid, map, rect.data(), rect.size(), 0);
    }
  }

  // Erosion by Disk(w_px / 2): keep a pixel only when no occupied pixel lies
  // within half the clearance width. Implemented through an exact distance
  // transform, which is equivalent to the disk structuring element.
  const double radius_px = profile.clearance_width / map.scale / 2.0;
  if (radius_px > 0.0) {
    const Eigen::MatrixXd dist_sq = occupied_distance_sq(map.grid);
    const double r_sq = radius_px * radius_px;
    for (int r = 0; r < resolution; ++r) {
      for (int c = 0; c < resolution; ++c) {
        if (map.grid(r, c) && dist_sq(r, c) <= r_sq) map.grid(r, c) = 0;
      }
    }
  }
  return map;
}

NavMap label_regions(NavMap map) {
  const int rows = static_cast<int>(map.grid.rows());
  const int cols = static_cast<int>(map.grid.cols());
  map.labels = NavMap::Labels::Zero(rows, cols);

  int next_id = 0;
  std::deque<GridIndex> queue;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!map.grid(r, c) || map.labels(r, c) != 0) continue;
      ++next_id;
      map.labels(r, c) = next_id;
      queue.push_back({r, c});
      while (!queue.empty()) {
        const GridIndex cur = queue.front();
        queue.pop_front();
        const GridIndex neighbors[4] = {{cur.row - 1, cur.col},
                                        {cur.row + 1, cur.col},
                                        {cur.row, cur.col - 1},
                                        {cur.row, cur.col + 1}};
        for (const GridIndex& n : neighbors) {
          if (!map.in_bounds(n)) continue;
          if (!map.grid(n.row, n.col) || map.labels(n.row, n.col) != 0) continue;
          map.labels(n.row, n.col) = next_id;
          queue.push_back(n);
        }
      }
    }
  }
  return map;
}

AgentPose initial_pose(const NavMap& map, const AgentProfile& profile,
                       std::uint64_t seed) {
  if (!map.labeled()) throw ArgumentError("initial_pose: map is not labeled");
  const int regions = map.region_count();
  if (regions == 0) throw SceneError("initial_pose: no walkable pixel");

  std::vector<std::size_t> sizes(regions + 1, 0);
  for (Eigen::Index i = 0; i < map.labels.size(); ++i) {
    ++sizes[map.labels.data()[i]];
  }
  int largest = 1;
  for (int id = 2; id <= regions; ++id) {
    if (sizes[id] > sizes[largest]) largest = id;
  }

  Rng rng = Rng(seed).split(/*tag=*/0x1d5e);
  const std::size_t pick = rng.bounded(sizes[largest]);

  std::size_t seen = 0;
  for (int r = 0; r < map.labels.rows(); ++r) {
    for (int c = 0; c < map.labels.cols(); ++c) {
      if (map.labels(r, c) != largest) continue;
      if (seen++ == pick) {
        AgentPose pose;
        pose.position = map.image_to_scene({r, c});
        pose.posture = profile.locomotion == Locomotion::wheel
                           ? Posture::seated
                           : Posture::standing;
        return pose;
      }
    }
  }
  throw SceneError("initial_pose: region scan failed");  // unreachable
}

PointCloud3 walkable_points_3d(const NavMap& map, int region_id) {
  if (!map.labeled()) throw ArgumentError("walkable_points_3d: map is not labeled");
  if (region_id < 1 || region_id > map.region_count())
    throw ArgumentError("walkable_points_3d: unknown region " +
                        std::to_string(region_id));

  PointCloud3 cloud;
  for (int r = 0; r < map.labels.rows(); ++r) {
    for (int c = 0; c < map.labels.cols(); ++c) {
      if (map.labels(r, c) != region_id) continue;
      const Vec2 xz = map.image_to_scene({r, c});
      const float y = map.floor_y(r, c);
      cloud.points.emplace_back(xz.x(), std::isnan(y) ? 0.0 : y, xz.y());
    }
  }
  return cloud;
}

std::vector<GridIndex> rasterize_convex_polygon(const NavMap& map,
                                                const Vec2* polygon,
                                                std::size_t count) {
  std::vector<GridIndex> pixels;
  if (count < 3) return pixels;
  Vec2 lo = polygon[0], hi = polygon[0];
  for (std::size_t i = 1; i < count; ++i) {
    lo = lo.cwiseMin(polygon[i]);
    hi = hi.cwiseMax(polygon[i]);
  }
  const GridIndex start = map.scene_to_image(lo);
  const GridIndex stop = map.scene_to_image(hi);
  const int rows = static_cast<int>(map.grid.rows());
  const int cols = static_cast<int>(map.grid.cols());
  for (int r = std::max(0, start.row); r <= std::min(rows - 1, stop.row); ++r) {
    for (int c = std::max(0, start.col); c <= std::min(cols - 1, stop.col); ++c) {
      if (point_in_convex_polygon(map.image_to_scene({r, c}), polygon, count)) {
        pixels.push_back({r, c});
      }
    }
  }
  return pixels;
}

}  // namespace scenecheck
