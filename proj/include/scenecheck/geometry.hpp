#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scenecheck {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Thrown when an operation receives arguments that violate its contract
/// (empty geometry, unknown ids, out-of-range values).
class ArgumentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Indexed triangle mesh in world coordinates, Y-up, meters.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  bool empty() const { return triangles.empty(); }
};

/// Box with yaw-only rotation about the vertical (Y) axis.
struct OrientedBox {
  Vec3 center{Vec3::Zero()};
  Vec3 half_extents{Vec3::Ones()};
  double yaw = 0.0;  // radians

  /// Local-to-world rotation. Local +X/+Z are the horizontal box axes.
  Eigen::Matrix3d rotation() const {
    return Eigen::AngleAxisd(yaw, Vec3::UnitY()).toRotationMatrix();
  }

  double min_y() const { return center.y() - half_extents.y(); }
  double max_y() const { return center.y() + half_extents.y(); }
};

/// The four vertical faces of an oriented box, used to anchor interaction
/// zones and clearance volumes. front/back face along local +Z/-Z, and
/// right/left along local +X/-X.
enum class BoxFace { front, back, left, right };

enum class ZoneColor { red, green, blue, yellow };

const char* to_string(BoxFace face);
const char* to_string(ZoneColor color);
BoxFace box_face_from_string(const std::string& name);

/// Ground-plane trapezoid flush with one vertical face of a box. Vertices are
/// XZ coordinates in counter-clockwise order: inner edge first (on the face
/// projection), then the flared outer edge.
struct InteractionZone {
  BoxFace face = BoxFace::front;
  std::array<Vec2, 4> polygon;
  ZoneColor color_tag = ZoneColor::red;
};

/// Plain 3D point set; carries walkable floor samples as well as functional
/// part volumes.
struct PointCloud3 {
  std::vector<Vec3> points;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

struct DistanceResult {
  double distance = 0.0;
  std::size_t point_index = 0;  // argmin over the query points
};

/// Exact minimum Euclidean distance between a point set and a triangle mesh.
/// Per-triangle bounding boxes prune the search; the result matches the
/// brute-force all-pairs minimum to within 1e-9 m.
DistanceResult min_distance_points_to_mesh(const PointCloud3& points,
                                           const TriangleMesh& mesh);

/// Minimum distance between two point sets (argmin index refers to `points`).
DistanceResult min_distance_points_to_points(const PointCloud3& points,
                                             const PointCloud3& target);

TriangleMesh translate_mesh(const TriangleMesh& mesh, const Vec3& offset);
PointCloud3 translate_points(const PointCloud3& cloud, const Vec3& offset);

/// True iff any occluder triangle cuts the open segment (origin, target)
/// strictly before the target. Hit-parameter tolerance is 1e-6 relative, so
/// triangles touching either endpoint do not count as blockers.
bool ray_blocked(const std::vector<const TriangleMesh*>& occluders,
                 const Vec3& origin, const Vec3& target);

/// Single segment-triangle test with the same endpoint tolerance.
bool segment_hits_triangle(const Vec3& origin, const Vec3& target,
                           const Vec3& a, const Vec3& b, const Vec3& c);

/// Closest point to `p` on triangle (a, b, c).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c);

/// Convex hull (counter-clockwise, no repeated first vertex) of 2D points.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Ground-plane silhouette of a mesh: convex hull of the XZ-projected
/// vertices. Exact for boxes, conservative for concave shapes.
std::vector<Vec2> project_footprint(const TriangleMesh& mesh);

/// Ground rectangle of a box, counter-clockwise.
std::array<Vec2, 4> box_footprint(const OrientedBox& box);

/// The eight corners of an oriented box.
std::array<Vec3, 8> box_corners(const OrientedBox& box);

/// Inclusive point-in-convex-polygon test (CCW vertex order).
bool point_in_convex_polygon(const Vec2& p, const Vec2* polygon,
                             std::size_t count);

bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b,
                          const Vec2& c);

/// One trapezoidal interaction zone per vertical box face. The inner edge
/// coincides with the face's ground projection; the outer edge sits `depth`
/// meters out and is `flare` times the face width.
std::vector<InteractionZone> face_zones(const OrientedBox& obb, double depth,
                                        double flare);

/// Separating-axis overlap of `box` against other boxes and mesh triangles.
/// Penetration of at most 1e-6 m counts as contact, not intersection, so
/// exactly touching geometry stays collision-free.
bool box_intersects(const OrientedBox& box,
                    const std::vector<OrientedBox>& others,
                    const std::vector<const TriangleMesh*>& meshes);

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);
bool box_overlaps_mesh(const OrientedBox& box, const TriangleMesh& mesh);

/// Axis-aligned box mesh for an oriented box (12 triangles).
TriangleMesh box_mesh(const OrientedBox& box);

double polygon_area(const std::vector<Vec2>& polygon);

}  // namespace scenecheck
