#pragma once

#include "scenecheck/navmap.hpp"
#include "scenecheck/scene.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scenecheck {

/// Internal invariant breach (e.g. the agent pose left the walkable set).
class EngineError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ZoneResolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Result of one boolean property verification. `metrics` carries a fixed
/// key set per property kind (required_distance_m / reach_m / via_crouch,
/// visibility_ratio / centroid_visible, zone_count, agent_area /
/// target_areas).
struct CheckOutcome {
  PropertyKind property = PropertyKind::navigable;
  bool status = false;
  std::string message;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
};

/// Articulation volume for handling actions: face-aligned box whose width and
/// height match the target face and whose depth is the minimum horizontal
/// extent of the target.
struct ClearanceBox {
  OrientedBox box;
  BoxFace zone_face = BoxFace::front;
};

ClearanceBox make_clearance_box(const OrientedBox& target, BoxFace face);

/// Maps (object, action) to the interaction zones the agent must stand in.
/// Implementations may throw ZoneResolverError; the engine records that in
/// the step trace.
class ZoneResolver {
public:
  virtual ~ZoneResolver() = default;
  virtual std::vector<InteractionZone> resolve(const SceneObject& object,
                                               AtomicAction action,
                                               const NavMap& map) const = 0;
};

/// Default heuristic: keep every face zone whose rasterized mask covers at
/// least one walkable pixel.
class WalkableOverlapResolver : public ZoneResolver {
public:
  WalkableOverlapResolver(double depth, double flare)
      : depth_(depth), flare_(flare) {}
  std::vector<InteractionZone> resolve(const SceneObject& object,
                                       AtomicAction action,
                                       const NavMap& map) const override;

private:
  double depth_;
  double flare_;
};

/// Zone faces annotated per (category, action); anything unlisted falls back
/// to the walkable-overlap heuristic.
class AnnotationResolver : public ZoneResolver {
public:
  using FaceTable = std::map<std::pair<std::string, std::string>,
                             std::vector<BoxFace>>;

  AnnotationResolver(FaceTable table, double depth, double flare)
      : table_(std::move(table)), fallback_(depth, flare),
        depth_(depth), flare_(flare) {}
  std::vector<InteractionZone> resolve(const SceneObject& object,
                                       AtomicAction action,
                                       const NavMap& map) const override;

private:
  FaceTable table_;
  WalkableOverlapResolver fallback_;
  double depth_;
  double flare_;
};

/// Supplies the functional-part point cloud (handles, seat edges) targeted
/// by the interactability check.
class FunctionalPartProvider {
public:
  virtual ~FunctionalPartProvider() = default;
  virtual PointCloud3 functional_part(const SceneObject& object,
                                      AtomicAction action) const = 0;
};

/// Parity fallback: the whole object surface counts as functional.
class FullMeshProvider : public FunctionalPartProvider {
public:
  explicit FullMeshProvider(bool area_weighted = false,
                            std::uint64_t seed = 0)
      : area_weighted_(area_weighted), seed_(seed) {}
  PointCloud3 functional_part(const SceneObject& object,
                              AtomicAction action) const override;

private:
  bool area_weighted_;
  std::uint64_t seed_;
};

/// Pre-authored clouds keyed by (object id, action); unknown keys yield an
/// empty cloud, which fails the check with an explicit message.
class FixturePartProvider : public FunctionalPartProvider {
public:
  using CloudTable = std::map<std::pair<std::string, std::string>, PointCloud3>;

  explicit FixturePartProvider(CloudTable table) : table_(std::move(table)) {}
  PointCloud3 functional_part(const SceneObject& object,
                              AtomicAction action) const override;

private:
  CloudTable table_;
};

struct VisibilityConfig {
  double threshold = 0.15;        // strict lower bound on the clear-ray ratio
  int eye_samples = 5;
  double eye_jitter_radius = 0.05;  // meters, horizontal
};

/// Deterministic mesh surface samples: every vertex plus each triangle's
/// barycenter.
PointCloud3 surface_samples(const TriangleMesh& mesh);

/// Area-weighted alternative (2 samples per triangle on average), seeded.
PointCloud3 surface_samples_area_weighted(const TriangleMesh& mesh,
                                          std::uint64_t seed);

struct NavigableResult {
  CheckOutcome outcome;
  AgentPose pose;  // updated only on success
};

/// Connectivity check: passes when some zone intersects the agent's current
/// region; the pose then moves to a seeded-random pixel of that
/// intersection. On failure the pose is returned unchanged.
NavigableResult check_navigable(const NavMap& map, const AgentPose& pose,
                                const std::vector<InteractionZone>& zones,
                                std::uint64_t rng_seed);

/// Reach test at shoulder height, retried at crouch height: the target is
/// shifted down by the test height and the minimum distance from the agent's
/// region floor points must not exceed the reach radius.
CheckOutcome check_reachable(const PointCloud3& floor_points,
                             const TriangleMesh& target,
                             const AgentProfile& profile, Posture posture);
CheckOutcome check_reachable(const PointCloud3& floor_points,
                             const PointCloud3& target,
                             const AgentProfile& profile, Posture posture);

CheckOutcome check_interactable(const SceneObject& object, AtomicAction action,
                                const FunctionalPartProvider& provider,
                                const PointCloud3& floor_points,
                                const AgentProfile& profile, Posture posture);

/// Articulation-space check: some zone's clearance box must be free of other
/// object boxes and wall meshes and have its center over the floor. Full
/// footprint containment is available behind `full_containment`.
CheckOutcome check_clearance(const SceneObject& object,
                             const std::vector<InteractionZone>& zones,
                             const Scene& scene, bool full_containment = false);

/// Eye positions used by the visibility check, exposed so callers can build
/// exact fixtures around the sampling.
std::vector<Vec3> sample_eye_positions(const AgentPose& pose,
                                       const AgentProfile& profile,
                                       const VisibilityConfig& cfg,
                                       std::uint64_t rng_seed,
                                       double ground_y = 0.0);

/// Multi-ray occlusion test from jittered eye positions to the target's
/// centroid and box corners; passes when the clear-ray ratio strictly
/// exceeds the threshold.
CheckOutcome check_visible(const AgentPose& pose, const AgentProfile& profile,
                           const SceneObject& target, const Scene& scene,
                           const VisibilityConfig& cfg, std::uint64_t rng_seed,
                           double ground_y = 0.0);

std::vector<InteractionZone> resolve_zones(const ZoneResolver& resolver,
                                           const SceneObject& object,
                                           AtomicAction action,
                                           const NavMap& map);

/// True when the XZ point lies over some floor triangle.
bool floor_contains(const TriangleMesh& floor, const Vec2& xz);

}  // namespace scenecheck
