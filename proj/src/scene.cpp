#include "scenecheck/scene.hpp"

#include <cmath>

namespace scenecheck {

void validate_profile(const AgentProfile& profile) {
  const auto fail = [&](const std::string& what) {
    throw ArgumentError("profile '" + profile.name + "': " + what);
  };
  if (profile.name.empty()) fail("name must be non-empty");
  if (profile.clearance_width <= 0.0) fail("clearance_width must be > 0");
  if (profile.standing_shoulder_height <= 0.0)
    fail("standing_shoulder_height must be > 0");
  if (profile.shoulder_to_eye_offset <= 0.0)
    fail("shoulder_to_eye_offset must be > 0");
  if (profile.eye_to_top_offset <= 0.0) fail("eye_to_top_offset must be > 0");
  if (profile.reach_radius <= 0.0) fail("reach_radius must be > 0");
  if (profile.crouch_factor < 0.0 || profile.crouch_factor > 1.0)
    fail("crouch_factor must be within [0, 1]");
  if (profile.posture_scale <= 0.0 || profile.posture_scale > 1.0)
    fail("posture_scale must be within (0, 1]");
  if (profile.locomotion == Locomotion::wheel && profile.posture_scale >= 1.0)
    fail("wheeled profiles require posture_scale < 1 (seated baseline)");
}

AgentProfile builtin_profile(const std::string& name) {
  AgentProfile p;
  p.name = name;
  if (name == "adult") {
    p.locomotion = Locomotion::walk;
    p.clearance_width = 0.40;
    p.standing_shoulder_height = 1.45;
    p.shoulder_to_eye_offset = 0.20;
    p.eye_to_top_offset = 0.10;
    p.crouch_factor = 0.40;
    p.reach_radius = 0.70;
    p.posture_scale = 1.0;
  } else if (name == "child") {
    p.locomotion = Locomotion::walk;
    p.clearance_width = 0.30;
    p.standing_shoulder_height = 0.85;
    p.shoulder_to_eye_offset = 0.15;
    p.eye_to_top_offset = 0.10;
    p.crouch_factor = 0.50;
    p.reach_radius = 0.40;
    p.posture_scale = 1.0;
  } else if (name == "wheelchair") {
    p.locomotion = Locomotion::wheel;
    p.clearance_width = 0.65;
    p.standing_shoulder_height = 1.45;
    p.shoulder_to_eye_offset = 0.20;
    p.eye_to_top_offset = 0.10;
    p.crouch_factor = 0.10;
    p.reach_radius = 0.70;
    p.posture_scale = 0.70;
  } else {
    throw ArgumentError("unknown built-in profile: " + name);
  }
  return p;
}

bool is_builtin_profile(const std::string& name) {
  return name == "adult" || name == "child" || name == "wheelchair";
}

EffectiveHeights effective_heights(const AgentProfile& profile, Posture posture) {
  EffectiveHeights h;
  if (profile.locomotion == Locomotion::wheel) {
    h.shoulder = profile.standing_shoulder_height * profile.posture_scale;
  } else if (posture == Posture::seated) {
    h.shoulder = 0.70 * profile.standing_shoulder_height;
  } else {
    h.shoulder = profile.standing_shoulder_height;
  }
  h.eye = h.shoulder + profile.shoulder_to_eye_offset;
  h.crouch = profile.crouch_factor * profile.standing_shoulder_height;
  h.total = profile.total_height();
  return h;
}

const SceneObject* Scene::find_object(const std::string& object_id) const {
  for (const SceneObject& object : objects) {
    if (object.id == object_id) return &object;
  }
  return nullptr;
}

const char* to_string(AtomicAction action) {
  switch (action) {
    case AtomicAction::navigate_to: return "navigate_to";
    case AtomicAction::sit_on: return "sit_on";
    case AtomicAction::lie_on: return "lie_on";
    case AtomicAction::toggle: return "toggle";
    case AtomicAction::pickup_from: return "pickup_from";
    case AtomicAction::release_on: return "release_on";
    case AtomicAction::open: return "open";
    case AtomicAction::close: return "close";
    case AtomicAction::put_in: return "put_in";
    case AtomicAction::take_out_of: return "take_out_of";
    case AtomicAction::look_at: return "look_at";
  }
  return "navigate_to";
}

const char* to_string(ActionFamily family) {
  switch (family) {
    case ActionFamily::mobility: return "mobility";
    case ActionFamily::contact: return "contact";
    case ActionFamily::handling: return "handling";
    case ActionFamily::perception: return "perception";
  }
  return "mobility";
}

const char* to_string(PropertyKind property) {
  switch (property) {
    case PropertyKind::navigable: return "navigable";
    case PropertyKind::reachable: return "reachable";
    case PropertyKind::interactable: return "interactable";
    case PropertyKind::clearance: return "clearance";
    case PropertyKind::visible: return "visible";
  }
  return "navigable";
}

const char* to_string(Locomotion locomotion) {
  return locomotion == Locomotion::wheel ? "wheel" : "walk";
}

const char* to_string(Posture posture) {
  return posture == Posture::seated ? "seated" : "standing";
}

AtomicAction action_from_string(const std::string& name) {
  for (const AtomicAction action : kAllActions) {
    if (name == to_string(action)) return action;
  }
  throw ArgumentError("unknown action: " + name);
}

PropertyKind property_from_string(const std::string& name) {
  for (const PropertyKind property :
       {PropertyKind::navigable, PropertyKind::reachable,
        PropertyKind::interactable, PropertyKind::clearance,
        PropertyKind::visible}) {
    if (name == to_string(property)) return property;
  }
  throw ArgumentError("unknown property: " + name);
}

Locomotion locomotion_from_string(const std::string& name) {
  if (name == "walk") return Locomotion::walk;
  if (name == "wheel") return Locomotion::wheel;
  throw ArgumentError("unknown locomotion mode: " + name);
}

ActionFamily action_family(AtomicAction action) {
  switch (action) {
    case AtomicAction::navigate_to:
    case AtomicAction::sit_on:
    case AtomicAction::lie_on:
      return ActionFamily::mobility;
    case AtomicAction::toggle:
    case AtomicAction::pickup_from:
    case AtomicAction::release_on:
      return ActionFamily::contact;
    case AtomicAction::open:
    case AtomicAction::close:
    case AtomicAction::put_in:
    case AtomicAction::take_out_of:
      return ActionFamily::handling;
    case AtomicAction::look_at:
      return ActionFamily::perception;
  }
  return ActionFamily::mobility;
}

const std::vector<PropertyKind>& required_properties(AtomicAction action) {
  static const std::vector<PropertyKind> mobility = {PropertyKind::navigable};
  static const std::vector<PropertyKind> contact = {PropertyKind::navigable,
                                                    PropertyKind::reachable};
  static const std::vector<PropertyKind> handling = {
      PropertyKind::navigable, PropertyKind::reachable,
      PropertyKind::interactable, PropertyKind::clearance};
  static const std::vector<PropertyKind> perception = {PropertyKind::visible};

  switch (action_family(action)) {
    case ActionFamily::mobility: return mobility;
    case ActionFamily::contact: return contact;
    case ActionFamily::handling: return handling;
    case ActionFamily::perception: return perception;
  }
  return mobility;
}

}  // namespace scenecheck
