#pragma once

#include "scenecheck/checks.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace scenecheck {

/// Raised before any check runs: the plan references objects the scene does
/// not contain, or is otherwise unusable.
class PlanError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct StepResult {
  AtomicAction action = AtomicAction::navigate_to;
  std::string object_id;
  bool success = false;
  std::vector<CheckOutcome> trace;  // ordered exactly as required_properties(action)
};

struct DiagnosticReport {
  std::string scene_id;
  std::string agent_name;
  std::string task_text;
  std::uint64_t seed = 0;
  bool overall_success = true;  // conjunction over steps (vacuously true)
  std::string insight;
  std::vector<StepResult> steps;
};

struct VerificationConfig {
  int resolution = 256;
  double zone_depth = 0.75;
  double zone_flare = 1.0;
  VisibilityConfig visibility;
  bool clearance_full_containment = false;
  bool mesh_silhouette_footprints = false;
  bool area_weighted_sampling = false;
  std::uint64_t seed = 0;
};

/// Runs every required property of every plan step in order, with no
/// short-circuit inside a step and no halting between steps: later steps are
/// verified and reported even after failures. The agent pose advances only
/// on navigability success; posture turns seated after a successful
/// sit_on/lie_on and back to standing after navigate_to for bipedal
/// profiles. Reports are byte-deterministic for a fixed seed.
///
/// `resolver` and `provider` may be null; the walkable-overlap resolver and
/// the full-mesh provider are used by default.
DiagnosticReport ground_plan(const Plan& plan, const Scene& scene,
                             const AgentProfile& profile,
                             const VerificationConfig& cfg,
                             const ZoneResolver* resolver = nullptr,
                             const FunctionalPartProvider* provider = nullptr);

/// Deterministic one-paragraph summary: confirms success, or names the first
/// failing step and each property that failed there with its diagnostics.
std::string summarize(const DiagnosticReport& report);

/// Step-level debug information kept by ground_plan when requested.
struct StepDebug {
  std::vector<InteractionZone> zones;
  std::vector<ClearanceBox> clearance_boxes;
  AgentPose pose_after;
};

DiagnosticReport ground_plan_debug(const Plan& plan, const Scene& scene,
                                   const AgentProfile& profile,
                                   const VerificationConfig& cfg,
                                   std::vector<StepDebug>* debug,
                                   const ZoneResolver* resolver = nullptr,
                                   const FunctionalPartProvider* provider = nullptr);

}  // namespace scenecheck
