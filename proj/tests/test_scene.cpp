#include "scenecheck/scene.hpp"

#include <doctest.h>

#include <set>

using namespace scenecheck;

TEST_CASE("required_properties follows the family mapping") {
  CHECK(required_properties(AtomicAction::navigate_to) ==
        std::vector<PropertyKind>{PropertyKind::navigable});
  CHECK(required_properties(AtomicAction::open) ==
        std::vector<PropertyKind>{PropertyKind::navigable, PropertyKind::reachable,
                                  PropertyKind::interactable,
                                  PropertyKind::clearance});
  CHECK(required_properties(AtomicAction::look_at) ==
        std::vector<PropertyKind>{PropertyKind::visible});
  CHECK(required_properties(AtomicAction::pickup_from) ==
        std::vector<PropertyKind>{PropertyKind::navigable, PropertyKind::reachable});
}

TEST_CASE("every action maps to one family and a non-empty check list") {
  std::set<std::vector<PropertyKind>> patterns;
  for (const AtomicAction action : kAllActions) {
    const auto& props = required_properties(action);
    CHECK_FALSE(props.empty());
    patterns.insert(props);

    // Family partition is total and consistent with the check list.
    switch (action_family(action)) {
      case ActionFamily::mobility: CHECK(props.size() == 1); break;
      case ActionFamily::contact: CHECK(props.size() == 2); break;
      case ActionFamily::handling: CHECK(props.size() == 4); break;
      case ActionFamily::perception:
        CHECK(props == std::vector<PropertyKind>{PropertyKind::visible});
        break;
    }
  }
  CHECK(patterns.size() == 4);
}

TEST_CASE("built-in profiles carry the published parameters") {
  const AgentProfile adult = builtin_profile("adult");
  CHECK(adult.locomotion == Locomotion::walk);
  CHECK(adult.clearance_width == 0.40);
  CHECK(adult.standing_shoulder_height == 1.45);
  CHECK(adult.shoulder_to_eye_offset == 0.20);
  CHECK(adult.eye_to_top_offset == 0.10);
  CHECK(adult.crouch_factor == 0.40);
  CHECK(adult.reach_radius == 0.70);
  CHECK(adult.posture_scale == 1.0);

  const AgentProfile child = builtin_profile("child");
  CHECK(child.locomotion == Locomotion::walk);
  CHECK(child.clearance_width == 0.30);
  CHECK(child.standing_shoulder_height == 0.85);
  CHECK(child.shoulder_to_eye_offset == 0.15);
  CHECK(child.eye_to_top_offset == 0.10);
  CHECK(child.crouch_factor == 0.50);
  CHECK(child.reach_radius == 0.40);
  CHECK(child.posture_scale == 1.0);

  const AgentProfile wheelchair = builtin_profile("wheelchair");
  CHECK(wheelchair.locomotion == Locomotion::wheel);
  CHECK(wheelchair.clearance_width == 0.65);
  CHECK(wheelchair.standing_shoulder_height == 1.45);
  CHECK(wheelchair.shoulder_to_eye_offset == 0.20);
  CHECK(wheelchair.eye_to_top_offset == 0.10);
  CHECK(wheelchair.crouch_factor == 0.10);
  CHECK(wheelchair.reach_radius == 0.70);
  CHECK(wheelchair.posture_scale == 0.70);

  CHECK_THROWS_AS(builtin_profile("robot"), ArgumentError);
  for (const char* name : {"adult", "child", "wheelchair"})
    CHECK_NOTHROW(validate_profile(builtin_profile(name)));
}

TEST_CASE("effective heights: posture rules") {
  const AgentProfile adult = builtin_profile("adult");
  const auto standing = effective_heights(adult, Posture::standing);
  CHECK(standing.eye == doctest::Approx(1.65).epsilon(1e-12));
  CHECK(standing.shoulder == doctest::Approx(1.45));
  CHECK(standing.crouch == doctest::Approx(0.58));
  CHECK(standing.total == doctest::Approx(1.75));

  const auto seated = effective_heights(adult, Posture::seated);
  CHECK(seated.shoulder == doctest::Approx(1.015).epsilon(1e-12));
  CHECK(seated.shoulder <= standing.shoulder);

  // Wheeled profiles keep the seated shoulder level in both postures.
  const AgentProfile wheelchair = builtin_profile("wheelchair");
  const auto wc_standing = effective_heights(wheelchair, Posture::standing);
  const auto wc_seated = effective_heights(wheelchair, Posture::seated);
  CHECK(wc_standing.shoulder == doctest::Approx(1.015).epsilon(1e-12));
  CHECK(wc_standing.shoulder == wc_seated.shoulder);
  CHECK(wc_standing.eye == wc_seated.eye);

  for (const char* name : {"adult", "child", "wheelchair"}) {
    const AgentProfile profile = builtin_profile(name);
    CHECK(effective_heights(profile, Posture::seated).shoulder <=
          effective_heights(profile, Posture::standing).shoulder);
  }
}

TEST_CASE("profile invariants are enforced") {
  AgentProfile profile = builtin_profile("adult");
  profile.clearance_width = -0.1;
  CHECK_THROWS_AS(validate_profile(profile), ArgumentError);

  profile = builtin_profile("adult");
  profile.crouch_factor = 1.2;
  CHECK_THROWS_AS(validate_profile(profile), ArgumentError);

  profile = builtin_profile("adult");
  profile.posture_scale = 0.0;
  CHECK_THROWS_AS(validate_profile(profile), ArgumentError);

  // Wheeled locomotion requires a seated baseline.
  profile = builtin_profile("wheelchair");
  profile.posture_scale = 1.0;
  CHECK_THROWS_AS(validate_profile(profile), ArgumentError);
}

TEST_CASE("action and property names round-trip") {
  for (const AtomicAction action : kAllActions)
    CHECK(action_from_string(to_string(action)) == action);
  CHECK_THROWS_AS(action_from_string("fly_to"), ArgumentError);
  for (const PropertyKind property :
       {PropertyKind::navigable, PropertyKind::reachable,
        PropertyKind::interactable, PropertyKind::clearance,
        PropertyKind::visible})
    CHECK(property_from_string(to_string(property)) == property);
}

TEST_CASE("scene object geometry falls back to the box mesh") {
  SceneObject object;
  object.id = "box";
  object.obb.center = {1, 1, 1};
  object.obb.half_extents = {0.5, 1.0, 0.25};
  const TriangleMesh mesh = object.geometry();
  CHECK(mesh.vertices.size() == 8);
  CHECK(mesh.triangles.size() == 12);
}
