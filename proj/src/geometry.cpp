#include "scenecheck/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scenecheck {

namespace {

constexpr double kSegmentTol = 1e-6;       // relative hit-parameter window
constexpr double kContactTol = 1e-6;       // penetration below this is contact

struct Aabb {
  Vec3 lo{Vec3::Constant(std::numeric_limits<double>::max())};
  Vec3 hi{Vec3::Constant(std::numeric_limits<double>::lowest())};

  void grow(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }

  double squared_distance(const Vec3& p) const {
    const Vec3 d = (lo - p).cwiseMax(0.0).cwiseMax(p - hi);
    return d.squaredNorm();
  }
};

}  // namespace

const char* to_string(BoxFace face) {
  switch (face) {
    case BoxFace::front: return "front";
    case BoxFace::back: return "back";
    case BoxFace::left: return "left";
    case BoxFace::right: return "right";
  }
  return "front";
}

const char* to_string(ZoneColor color) {
  switch (color) {
    case ZoneColor::red: return "red";
    case ZoneColor::green: return "green";
    case ZoneColor::blue: return "blue";
    case ZoneColor::yellow: return "yellow";
  }
  return "red";
}

BoxFace box_face_from_string(const std::string& name) {
  if (name == "front") return BoxFace::front;
  if (name == "back") return BoxFace::back;
  if (name == "left") return BoxFace::left;
  if (name == "right") return BoxFace::right;
  throw ArgumentError("unknown box face: " + name);
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c) {
  // Ericson, Real-Time Collision Detection 5.1.5.
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return a + v * ab;
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return a + w * ac;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + w * (c - b);
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return a + ab * v + ac * w;
}

DistanceResult min_distance_points_to_mesh(const PointCloud3& points,
                                           const TriangleMesh& mesh) {
  if (points.empty()) throw ArgumentError("min_distance: empty point set");
  if (mesh.empty()) throw ArgumentError("min_distance: empty mesh");

  std::vector<Aabb> boxes(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (const auto idx : mesh.triangles[t]) boxes[t].grow(mesh.vertices[idx]);
  }

  double best_sq = std::numeric_limits<double>::max();
  std::size_t best_point = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points.points[i];
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      if (boxes[t].squared_distance(p) >= best_sq) continue;
      const auto& tri = mesh.triangles[t];
      const Vec3 q = closest_point_on_triangle(p, mesh.vertices[tri[0]],
                                               mesh.vertices[tri[1]],
                                               mesh.vertices[tri[2]]);
      const double d = (p - q).squaredNorm();
      if (d < best_sq) {
        best_sq = d;
        best_point = i;
      }
    }
  }
  return {std::sqrt(best_sq), best_point};
}

DistanceResult min_distance_points_to_points(const PointCloud3& points,
                                             const PointCloud3& target) {
  if (points.empty() || target.empty())
    throw ArgumentError("min_distance: empty point set");

  double best_sq = std::numeric_limits<double>::max();
  std::size_t best_point = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points.points[i];
    for (const Vec3& q : target.points) {
      const double d = (p - q).squaredNorm();
      if (d < best_sq) {
        best_sq = d;
        best_point = i;
      }
    }
  }
  return {std::sqrt(best_sq), best_point};
}

TriangleMesh translate_mesh(const TriangleMesh& mesh, const Vec3& offset) {
  TriangleMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) out.vertices.push_back(v + offset);
  out.triangles = mesh.triangles;
  return out;
}

PointCloud3 translate_points(const PointCloud3& cloud, const Vec3& offset) {
  PointCloud3 out;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) out.points.push_back(p + offset);
  return out;
}

bool segment_hits_triangle(const Vec3& origin, const Vec3& target,
                           const Vec3& a, const Vec3& b, const Vec3& c) {
  // Moeller-Trumbore over the segment parameterization; hits count only for
  // t in (tol, 1 - tol) so endpoint contact never blocks.
  const Vec3 dir = target - origin;
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 pvec = dir.cross(ac);
  const double det = ab.dot(pvec);
  const double scale = ab.norm() * ac.norm() * dir.norm();
  if (std::abs(det) <= 1e-12 * std::max(scale, 1e-300)) return false;

  const double inv_det = 1.0 / det;
  const Vec3 tvec = origin - a;
  const double u = tvec.dot(pvec) * inv_det;
  if (u < -1e-9 || u > 1.0 + 1e-9) return false;

  const Vec3 qvec = tvec.cross(ab);
  const double v = dir.dot(qvec) * inv_det;
  if (v < -1e-9 || u + v > 1.0 + 1e-9) return false;

  const double t = ac.dot(qvec) * inv_det;
  return t > kSegmentTol && t < 1.0 - kSegmentTol;
}

bool ray_blocked(const std::vector<const TriangleMesh*>& occluders,
                 const Vec3& origin, const Vec3& target) {
  for (const TriangleMesh* mesh : occluders) {
    if (mesh == nullptr) continue;
    for (const auto& tri : mesh->triangles) {
      if (segment_hits_triangle(origin, target, mesh->vertices[tri[0]],
                                mesh->vertices[tri[1]],
                                mesh->vertices[tri[2]])) {
        return true;
      }
    }
  }
  return false;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  if (points.size() < 3) return points;
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& a, const Vec2& b) {
                             return a.x() == b.x() && a.y() == b.y();
                           }),
               points.end());
  if (points.size() < 3) return points;

  const auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) -
           (a.y() - o.y()) * (b.x() - o.x());
  };

  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const Vec2& p : points) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {  // upper
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0.0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Vec2> project_footprint(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw ArgumentError("project_footprint: empty mesh");
  std::vector<Vec2> projected;
  projected.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) projected.emplace_back(v.x(), v.z());
  return convex_hull(std::move(projected));
}

std::array<Vec2, 4> box_footprint(const OrientedBox& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  // Local +X and +Z axes mapped to the XZ ground plane.
  const Vec2 ux(c, -s);
  const Vec2 uz(s, c);
  const Vec2 center(box.center.x(), box.center.z());
  const double hx = box.half_extents.x();
  const double hz = box.half_extents.z();
  return {center - ux * hx - uz * hz, center + ux * hx - uz * hz,
          center + ux * hx + uz * hz, center - ux * hx + uz * hz};
}

std::array<Vec3, 8> box_corners(const OrientedBox& box) {
  const Eigen::Matrix3d rot = box.rotation();
  std::array<Vec3, 8> corners;
  std::size_t k = 0;
  for (const double sx : {-1.0, 1.0})
    for (const double sy : {-1.0, 1.0})
      for (const double sz : {-1.0, 1.0})
        corners[k++] = box.center + rot * box.half_extents.cwiseProduct(
                                              Vec3(sx, sy, sz));
  return corners;
}

bool point_in_convex_polygon(const Vec2& p, const Vec2* polygon,
                             std::size_t count) {
  if (count < 3) return false;
  for (std::size_t i = 0; i < count; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % count];
    const double cross = (b.x() - a.x()) * (p.y() - a.y()) -
                         (b.y() - a.y()) * (p.x() - a.x());
    if (cross < -1e-12) return false;
  }
  return true;
}

bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b,
                          const Vec2& c) {
  const auto side = [&p](const Vec2& u, const Vec2& v) {
    return (v.x() - u.x()) * (p.y() - u.y()) -
           (v.y() - u.y()) * (p.x() - u.x());
  };
  const double d1 = side(a, b);
  const double d2 = side(b, c);
  const double d3 = side(c, a);
  const bool has_neg = (d1 < -1e-12) || (d2 < -1e-12) || (d3 < -1e-12);
  const bool has_pos = (d1 > 1e-12) || (d2 > 1e-12) || (d3 > 1e-12);
  return !(has_neg && has_pos);
}

std::vector<InteractionZone> face_zones(const OrientedBox& obb, double depth,
                                        double flare) {
  if (depth <= 0.0) throw ArgumentError("face_zones: depth must be positive");
  if (flare < 1.0) throw ArgumentError("face_zones: flare must be >= 1");

  const double c = std::cos(obb.yaw);
  const double s = std::sin(obb.yaw);
  const Vec2 ux(c, -s);  // local +X on the ground plane
  const Vec2 uz(s, c);   // local +Z on the ground plane
  const Vec2 center(obb.center.x(), obb.center.z());
  const double hx = obb.half_extents.x();
  const double hz = obb.half_extents.z();

  struct FaceSpec {
    BoxFace face;
    Vec2 normal;
    Vec2 tangent;
    double offset;      // distance from center to the face plane
    double half_width;  // half the face width along the tangent
    ZoneColor color;
  };
  const FaceSpec specs[4] = {
      {BoxFace::front, uz, ux, hz, hx, ZoneColor::red},
      {BoxFace::back, -uz, ux, hz, hx, ZoneColor::green},
      {BoxFace::left, -ux, uz, hx, hz, ZoneColor::blue},
      {BoxFace::right, ux, uz, hx, hz, ZoneColor::yellow},
  };

  std::vector<InteractionZone> zones;
  zones.reserve(4);
  for (const FaceSpec& spec : specs) {
    const Vec2 face_center = center + spec.normal * spec.offset;
    const Vec2 outer_center = face_center + spec.normal * depth;
    const double inner_half = spec.half_width;
    const double outer_half = spec.half_width * flare;
    // Orient the tangent so the vertex loop comes out counter-clockwise.
    Vec2 tangent = spec.tangent;
    if (tangent.x() * spec.normal.y() - tangent.y() * spec.normal.x() < 0.0)
      tangent = -tangent;
    InteractionZone zone;
    zone.face = spec.face;
    zone.color_tag = spec.color;
    zone.polygon = {face_center - tangent * inner_half,
                    face_center + tangent * inner_half,
                    outer_center + tangent * outer_half,
                    outer_center - tangent * outer_half};
    zones.push_back(zone);
  }
  return zones;
}

namespace {

// Projection radius of an OBB onto a unit axis.
double box_radius(const Eigen::Matrix3d& rot, const Vec3& half, const Vec3& axis) {
  return half.x() * std::abs(axis.dot(rot.col(0))) +
         half.y() * std::abs(axis.dot(rot.col(1))) +
         half.z() * std::abs(axis.dot(rot.col(2)));
}

// Minimum penetration over the candidate axes; <= 0 means separated.
bool separated_on_axis(const OrientedBox& a, const OrientedBox& b,
                       const Vec3& axis) {
  const double len = axis.norm();
  if (len < 1e-12) return false;  // degenerate axis, skip
  const Vec3 n = axis / len;
  const double dist = std::abs((b.center - a.center).dot(n));
  const double ra = box_radius(a.rotation(), a.half_extents, n);
  const double rb = box_radius(b.rotation(), b.half_extents, n);
  return dist >= ra + rb - kContactTol;
}

}  // namespace

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
  const Eigen::Matrix3d ra = a.rotation();
  const Eigen::Matrix3d rb = b.rotation();
  std::vector<Vec3> axes;
  axes.reserve(15);
  for (int i = 0; i < 3; ++i) axes.push_back(ra.col(i));
  for (int i = 0; i < 3; ++i) axes.push_back(rb.col(i));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) axes.push_back(ra.col(i).cross(rb.col(j)));

  for (const Vec3& axis : axes) {
    if (separated_on_axis(a, b, axis)) return false;
  }
  return true;
}

bool box_overlaps_mesh(const OrientedBox& box, const TriangleMesh& mesh) {
  const Eigen::Matrix3d rot = box.rotation();
  const Eigen::Matrix3d inv = rot.transpose();
  const Vec3 h = box.half_extents;

  for (const auto& tri : mesh.triangles) {
    // Triangle in box-local coordinates, box reduced to a centered AABB.
    const Vec3 v0 = inv * (mesh.vertices[tri[0]] - box.center);
    const Vec3 v1 = inv * (mesh.vertices[tri[1]] - box.center);
    const Vec3 v2 = inv * (mesh.vertices[tri[2]] - box.center);
    const Vec3 e0 = v1 - v0;
    const Vec3 e1 = v2 - v1;
    const Vec3 e2 = v0 - v2;

    bool separated = false;
    const auto test_axis = [&](const Vec3& axis) {
      const double len2 = axis.squaredNorm();
      if (len2 < 1e-24) return;
      const Vec3 n = axis / std::sqrt(len2);
      const double p0 = v0.dot(n);
      const double p1 = v1.dot(n);
      const double p2 = v2.dot(n);
      const double r = h.x() * std::abs(n.x()) + h.y() * std::abs(n.y()) +
                       h.z() * std::abs(n.z());
      const double tri_min = std::min({p0, p1, p2});
      const double tri_max = std::max({p0, p1, p2});
      if (tri_min >= r - kContactTol || tri_max <= -r + kContactTol)
        separated = true;
    };

    // 3 box normals, the triangle normal and 9 edge cross products.
    test_axis(Vec3::UnitX());
    if (!separated) test_axis(Vec3::UnitY());
    if (!separated) test_axis(Vec3::UnitZ());
    if (!separated) test_axis(e0.cross(e1));
    for (const Vec3& e : {e0, e1, e2}) {
      if (separated) break;
      test_axis(Vec3::UnitX().cross(e));
      if (!separated) test_axis(Vec3::UnitY().cross(e));
      if (!separated) test_axis(Vec3::UnitZ().cross(e));
    }
    if (!separated) return true;
  }
  return false;
}

bool box_intersects(const OrientedBox& box,
                    const std::vector<OrientedBox>& others,
                    const std::vector<const TriangleMesh*>& meshes) {
  for (const OrientedBox& other : others) {
    if (boxes_overlap(box, other)) return true;
  }
  for (const TriangleMesh* mesh : meshes) {
    if (mesh != nullptr && box_overlaps_mesh(box, *mesh)) return true;
  }
  return false;
}

TriangleMesh box_mesh(const OrientedBox& box) {
  const auto corners = box_corners(box);
  TriangleMesh mesh;
  mesh.vertices.assign(corners.begin(), corners.end());
  // Corner order from box_corners: bit pattern (x, y, z), -1 before +1.
  static const std::array<std::array<std::uint32_t, 3>, 12> kFaces = {{
      {0, 1, 3}, {0, 3, 2},  // -x
      {4, 6, 7}, {4, 7, 5},  // +x
      {0, 4, 5}, {0, 5, 1},  // -y
      {2, 3, 7}, {2, 7, 6},  // +y
      {0, 2, 6}, {0, 6, 4},  // -z
      {1, 5, 7}, {1, 7, 3},  // +z
  }};
  mesh.triangles.assign(kFaces.begin(), kFaces.end());
  return mesh;
}

double polygon_area(const std::vector<Vec2>& polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % polygon.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * std::abs(twice);
}

}  // namespace scenecheck
