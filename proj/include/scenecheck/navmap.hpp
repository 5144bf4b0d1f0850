#pragma once

#include "scenecheck/scene.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace scenecheck {

/// Thrown for unusable scenes (degenerate floor, no walkable space).
class SceneError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GridIndex {
  int row = 0;  // increases with world +Z
  int col = 0;  // increases with world +X
};

/// Agent-conditioned 2D walkability grid.
///
/// The grid covers the floor's bounding square plus a 5% margin; a pixel is
/// walkable (1) when the agent's body disk fits there after morphological
/// erosion by half the clearance width. `labels` holds 4-connected region
/// ids (0 = non-walkable, regions numbered from 1 in raster-scan order of
/// their first pixel) once label_regions() has run.
struct NavMap {
  using Grid = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;
  using Labels = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>;
  using Heights = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic,
                                Eigen::RowMajor>;

  Grid grid;        // 1 = walkable
  Labels labels;    // empty until label_regions()
  Heights floor_y;  // floor elevation per pixel (NaN off the floor)
  int resolution = 0;
  double scale = 0.0;          // meters per pixel
  Vec2 origin{Vec2::Zero()};   // world XZ of the grid's (row 0, col 0) corner
  std::string agent_name;

  bool labeled() const { return labels.size() == grid.size(); }
  int region_count() const;
  std::size_t region_size(int region_id) const;

  bool in_bounds(GridIndex idx) const {
    return idx.row >= 0 && idx.col >= 0 && idx.row < grid.rows() &&
           idx.col < grid.cols();
  }

  GridIndex scene_to_image(const Vec2& xz) const;
  Vec2 image_to_scene(GridIndex idx) const;  // pixel center
};

struct AgentPose {
  Vec2 position{Vec2::Zero()};  // world XZ, meters
  Posture posture = Posture::standing;
};

/// Builds the walkability grid for one (scene, profile) pair: rasterize the
/// floor, stamp every object footprint whose underside sits at or below the
/// agent's total height, then erode by a disk of half the clearance width.
/// Objects hanging above that height (ceiling lamps) are ignored. Footprints
/// come from the OBB ground rectangle unless `mesh_silhouettes` asks for the
/// projected mesh hull instead.
NavMap build_navmap(const Scene& scene, const AgentProfile& profile,
                    int resolution = 256, bool mesh_silhouettes = false);

/// 4-connected component labeling; ids dense from 1, ordered by the raster
/// scan position of each region's first pixel.
NavMap label_regions(NavMap map);

/// Deterministic sample from the largest region (ties break to the smaller
/// region id); posture starts seated for wheeled profiles.
AgentPose initial_pose(const NavMap& map, const AgentProfile& profile,
                       std::uint64_t seed);

/// World-space pixel centers of one region, y set to the floor elevation.
PointCloud3 walkable_points_3d(const NavMap& map, int region_id);

/// Pixels (raster order) covered by a convex ground polygon.
std::vector<GridIndex> rasterize_convex_polygon(const NavMap& map,
                                                const Vec2* polygon,
                                                std::size_t count);

}  // namespace scenecheck
