#pragma once

#include "scenecheck/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace scenecheck {

enum class Locomotion { walk, wheel };
enum class Posture { standing, seated };

/// Embodiment parameters. Lengths are meters; the derived shoulder, eye and
/// crouch heights come from effective_heights() rather than being stored.
struct AgentProfile {
  std::string name;
  Locomotion locomotion = Locomotion::walk;
  double clearance_width = 0.4;         // body width for collision-free passage
  double standing_shoulder_height = 1.45;
  double shoulder_to_eye_offset = 0.2;
  double eye_to_top_offset = 0.1;
  double crouch_factor = 0.4;           // fraction of standing shoulder height
  double reach_radius = 0.7;
  double posture_scale = 1.0;           // static seated reduction, 1.0 if bipedal

  double total_height() const {
    return standing_shoulder_height + shoulder_to_eye_offset + eye_to_top_offset;
  }
};

/// Validates profile invariants; throws ArgumentError listing the violation.
void validate_profile(const AgentProfile& profile);

/// Built-in profiles: "adult", "child", "wheelchair".
AgentProfile builtin_profile(const std::string& name);
bool is_builtin_profile(const std::string& name);

struct EffectiveHeights {
  double shoulder = 0.0;
  double eye = 0.0;
  double crouch = 0.0;
  double total = 0.0;
};

/// Posture-dependent heights. Wheeled profiles keep a fixed seated shoulder
/// level (standing height times posture_scale) regardless of posture; bipedal
/// profiles drop to 70% of standing shoulder height when seated.
EffectiveHeights effective_heights(const AgentProfile& profile, Posture posture);

struct SceneObject {
  std::string id;
  std::string category;
  OrientedBox obb;
  std::optional<TriangleMesh> mesh;  // world coordinates; box mesh synthesized when absent

  /// Mesh if present, otherwise the box mesh of the OBB.
  TriangleMesh geometry() const {
    return mesh.has_value() ? *mesh : box_mesh(obb);
  }
};

struct Scene {
  std::string id;
  TriangleMesh floor;
  std::vector<TriangleMesh> walls;
  std::vector<SceneObject> objects;

  const SceneObject* find_object(const std::string& object_id) const;
};

enum class AtomicAction {
  navigate_to,
  sit_on,
  lie_on,
  toggle,
  pickup_from,
  release_on,
  open,
  close,
  put_in,
  take_out_of,
  look_at,
};

enum class ActionFamily { mobility, contact, handling, perception };

enum class PropertyKind { navigable, reachable, interactable, clearance, visible };

const char* to_string(AtomicAction action);
const char* to_string(ActionFamily family);
const char* to_string(PropertyKind property);
const char* to_string(Locomotion locomotion);
const char* to_string(Posture posture);

AtomicAction action_from_string(const std::string& name);
PropertyKind property_from_string(const std::string& name);
Locomotion locomotion_from_string(const std::string& name);

ActionFamily action_family(AtomicAction action);

/// Ordered property requirements per action family:
///   mobility    -> navigable
///   contact     -> navigable, reachable
///   handling    -> navigable, reachable, interactable, clearance
///   perception  -> visible
const std::vector<PropertyKind>& required_properties(AtomicAction action);

constexpr std::array<AtomicAction, 11> kAllActions = {
    AtomicAction::navigate_to, AtomicAction::sit_on,     AtomicAction::lie_on,
    AtomicAction::toggle,      AtomicAction::pickup_from, AtomicAction::release_on,
    AtomicAction::open,        AtomicAction::close,      AtomicAction::put_in,
    AtomicAction::take_out_of, AtomicAction::look_at,
};

struct PlanStep {
  AtomicAction action = AtomicAction::navigate_to;
  std::string object_id;
};

struct Plan {
  std::string agent;
  std::string task;
  std::vector<PlanStep> steps;
};

}  // namespace scenecheck
