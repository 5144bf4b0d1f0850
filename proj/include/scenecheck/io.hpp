#pragma once

#include "scenecheck/engine.hpp"
#include "scenecheck/metrics.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace scenecheck {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Carries every violation found while validating a document, not just the
/// first one.
class SchemaError : public std::runtime_error {
public:
  SchemaError(std::string context, std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

private:
  std::vector<std::string> violations_;
};

/// Minimal ASCII OBJ reader: v/f records only, polygons fan-triangulated,
/// negative indices resolved relative to the current vertex count.
/// Degenerate triangles (area below 1e-12 m^2) are dropped and counted.
TriangleMesh load_obj(const std::filesystem::path& path,
                      std::size_t* dropped_degenerate = nullptr);

struct LoadedScene {
  Scene scene;
  std::vector<std::string> warnings;  // soft violations, e.g. mesh outside OBB
};

/// Scene document: floor and walls are either inline
/// {"vertices": [[x,y,z]...], "triangles": [[a,b,c]...]} or OBJ paths
/// relative to the scene file; objects carry id/category/position/yaw/size
/// plus an optional mesh path. A box mesh is synthesized when the mesh is
/// absent. Meshes protruding more than `mesh_obb_tolerance` beyond their OBB
/// produce warnings.
LoadedScene load_scene(const std::filesystem::path& path,
                       double mesh_obb_tolerance = 0.05);
LoadedScene scene_from_json(const Json& doc, const std::filesystem::path& base_dir,
                            const std::string& context,
                            double mesh_obb_tolerance = 0.05);

Plan load_plan(const std::filesystem::path& path);

AgentProfile profile_from_json(const Json& doc, const std::string& context);
Json profile_to_json(const AgentProfile& profile);
AgentProfile load_profile(const std::filesystem::path& path);
void save_profile(const AgentProfile& profile, const std::filesystem::path& path);

/// Built-in profile name, or a path to a profile JSON file.
AgentProfile resolve_agent(const std::string& name_or_path);

Json report_to_json(const DiagnosticReport& report);
DiagnosticReport report_from_json(const Json& doc);
void save_report(const DiagnosticReport& report, const std::filesystem::path& path);
DiagnosticReport load_report(const std::filesystem::path& path);

/// Fixture provider file: {"<object_id>": {"<action>": [[x,y,z], ...]}}.
FixturePartProvider::CloudTable load_part_fixtures(const std::filesystem::path& path);

/// Zone annotation file: {"<category>": {"<action>": ["front", ...]}}.
AnnotationResolver::FaceTable load_zone_annotations(const std::filesystem::path& path);

/// Binary PGM (P5) of the walkability grid: 255 = walkable, 0 = occupied.
/// A comment line records the scale and origin; bytes are reproducible.
void render_navmap(const NavMap& map, const std::filesystem::path& path);

/// Region labels as label-scaled gray values (0 stays 0).
void render_regions(const NavMap& map, const std::filesystem::path& path);

/// Binary mask render used for per-step zone debug output.
void render_mask(const NavMap& map, const std::vector<GridIndex>& pixels,
                 const std::filesystem::path& path);

std::vector<LabelRecord> load_labels_jsonl(const std::filesystem::path& path);
std::vector<PredictionRecord> load_predictions_jsonl(
    const std::filesystem::path& path, PredictionMode mode);

struct CompletionRecord {
  std::string task_id;
  std::string completion;
  std::optional<std::int64_t> group;
};

std::vector<CompletionRecord> load_completions_jsonl(
    const std::filesystem::path& path);

struct AuditRun {
  std::filesystem::path scene_path;
  std::filesystem::path plan_path;
  std::string agent;  // builtin name or profile path
};

struct AuditManifest {
  std::vector<AuditRun> runs;
  VerificationConfig config;
};

AuditManifest load_manifest(const std::filesystem::path& path);

/// Runs every manifest entry (optionally on several worker threads) and
/// aggregates task-success and per-property pass rates per agent profile.
/// Aggregation order is fixed by the manifest, so the summary is identical
/// for any worker count.
Json run_audit(const AuditManifest& manifest, int workers);

}  // namespace scenecheck
