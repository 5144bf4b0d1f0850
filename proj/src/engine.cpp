#include "scenecheck/engine.hpp"

#include "scenecheck/rng.hpp"

#include <cmath>
#include <map>

namespace scenecheck {

namespace {

// Per-step RNG streams, all derived from the run seed.
constexpr std::uint64_t kStreamNavigate = 1;
constexpr std::uint64_t kStreamVisibility = 2;

std::uint64_t step_seed(std::uint64_t run_seed, std::uint64_t stream,
                        std::size_t step_index) {
  Rng rng = Rng(run_seed).split(stream, step_index);
  return rng.next_u64();
}

bool needs_zones(AtomicAction action) {
  const auto& props = required_properties(action);
  for (const PropertyKind p : props) {
    if (p == PropertyKind::navigable || p == PropertyKind::clearance) return true;
  }
  return false;
}

}  // namespace

DiagnosticReport ground_plan(const Plan& plan, const Scene& scene,
                             const AgentProfile& profile,
                             const VerificationConfig& cfg,
                             const ZoneResolver* resolver,
                             const FunctionalPartProvider* provider) {
  return ground_plan_debug(plan, scene, profile, cfg, nullptr, resolver,
                           provider);
}

DiagnosticReport ground_plan_debug(const Plan& plan, const Scene& scene,
                                   const AgentProfile& profile,
                                   const VerificationConfig& cfg,
                                   std::vector<StepDebug>* debug,
                                   const ZoneResolver* resolver,
                                   const FunctionalPartProvider* provider) {
  validate_profile(profile);
  for (const PlanStep& step : plan.steps) {
    if (scene.find_object(step.object_id) == nullptr) {
      throw PlanError("plan step targets unknown object '" + step.object_id +
                      "' in scene '" + scene.id + "'");
    }
  }

  const WalkableOverlapResolver default_resolver(cfg.zone_depth, cfg.zone_flare);
  if (resolver == nullptr) resolver = &default_resolver;
  const FullMeshProvider default_provider(cfg.area_weighted_sampling, cfg.seed);
  if (provider == nullptr) provider = &default_provider;

  const NavMap map = label_regions(
      build_navmap(scene, profile, cfg.resolution, cfg.mesh_silhouette_footprints));
  AgentPose pose = initial_pose(map, profile, cfg.seed);

  DiagnosticReport report;
  report.scene_id = scene.id;
  report.agent_name = profile.name;
  report.task_text = plan.task;
  report.seed = cfg.seed;
  if (debug != nullptr) debug->clear();

  // Region floor clouds are reused across steps that share a region.
  std::map<int, PointCloud3> region_points;
  const auto floor_points_for = [&](const AgentPose& at) -> const PointCloud3& {
    const GridIndex px = map.scene_to_image(at.position);
    const int region = map.labels(px.row, px.col);
    auto it = region_points.find(region);
    if (it == region_points.end())
      it = region_points.emplace(region, walkable_points_3d(map, region)).first;
    return it->second;
  };
  const auto ground_y_at = [&](const AgentPose& at) {
    const GridIndex px = map.scene_to_image(at.position);
    const float y = map.floor_y(px.row, px.col);
    return std::isnan(y) ? 0.0 : static_cast<double>(y);
  };

  for (std::size_t t = 0; t < plan.steps.size(); ++t) {
    const PlanStep& step = plan.steps[t];
    const SceneObject& object = *scene.find_object(step.object_id);

    StepResult result;
    result.action = step.action;
    result.object_id = step.object_id;

    std::vector<InteractionZone> zones;
    std::string resolver_failure;
    if (needs_zones(step.action)) {
      try {
        zones = resolve_zones(*resolver, object, step.action, map);
      } catch (const ZoneResolverError& err) {
        resolver_failure = err.what();
      }
    }

    StepDebug step_debug;
    for (const PropertyKind property : required_properties(step.action)) {
      switch (property) {
        case PropertyKind::navigable: {
          if (!resolver_failure.empty()) {
            CheckOutcome outcome;
            outcome.property = PropertyKind::navigable;
            outcome.status = false;
            outcome.message = "Zone resolver failed: " + resolver_failure;
            result.trace.push_back(std::move(outcome));
            break;
          }
          NavigableResult nav = check_navigable(
              map, pose, zones, step_seed(cfg.seed, kStreamNavigate, t));
          pose = nav.pose;
          result.trace.push_back(std::move(nav.outcome));
          break;
        }
        case PropertyKind::reachable: {
          result.trace.push_back(check_reachable(
              floor_points_for(pose), object.geometry(), profile, pose.posture));
          break;
        }
        case PropertyKind::interactable: {
          result.trace.push_back(check_interactable(object, step.action,
                                                    *provider,
                                                    floor_points_for(pose),
                                                    profile, pose.posture));
          break;
        }
        case PropertyKind::clearance: {
          result.trace.push_back(check_clearance(
              object, zones, scene, cfg.clearance_full_containment));
          if (debug != nullptr) {
            for (const InteractionZone& zone : zones)
              step_debug.clearance_boxes.push_back(
                  make_clearance_box(object.obb, zone.face));
          }
          break;
        }
        case PropertyKind::visible: {
          result.trace.push_back(check_visible(
              pose, profile, object, scene, cfg.visibility,
              step_seed(cfg.seed, kStreamVisibility, t), ground_y_at(pose)));
          break;
        }
      }
    }

    result.success = true;
    for (const CheckOutcome& outcome : result.trace)
      result.success = result.success && outcome.status;

    if (result.success) {
      if (step.action == AtomicAction::sit_on ||
          step.action == AtomicAction::lie_on) {
        pose.posture = Posture::seated;
      } else if (step.action == AtomicAction::navigate_to &&
                 profile.locomotion == Locomotion::walk) {
        pose.posture = Posture::standing;
      }
    }

    report.overall_success = report.overall_success && result.success;
    report.steps.push_back(std::move(result));
    if (debug != nullptr) {
      step_debug.zones = std::move(zones);
      step_debug.pose_after = pose;
      debug->push_back(std::move(step_debug));
    }
  }

  report.insight = summarize(report);
  return report;
}

std::string summarize(const DiagnosticReport& report) {
  if (report.overall_success) {
    return "Plan is fully executable for agent " + report.agent_name + ".";
  }
  for (std::size_t t = 0; t < report.steps.size(); ++t) {
    const StepResult& step = report.steps[t];
    if (step.success) continue;
    std::string text = "Plan fails at step " + std::to_string(t + 1) + " (" +
                       to_string(step.action) + ", " + step.object_id + ").";
    for (const CheckOutcome& outcome : step.trace) {
      if (outcome.status) continue;
      text += " ";
      text += to_string(outcome.property);
      text += ": ";
      text += outcome.message;
    }
    return text;
  }
  return "Plan failed, but no failing step was recorded.";  // unreachable
}

}  // namespace scenecheck
