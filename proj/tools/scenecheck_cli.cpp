// Command-line surface for plan verification, navigation-map export,
// benchmark metrics and completion rewards.

#include "scenecheck/engine.hpp"
#include "scenecheck/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace scenecheck;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

[[noreturn]] void fail_with(const std::string& kind, const std::exception& err) {
  Json error;
  error["error"] = kind;
  error["message"] = err.what();
  if (const auto* schema = dynamic_cast<const SchemaError*>(&err)) {
    error["violations"] = schema->violations();
  }
  std::cerr << error.dump() << "\n";
  std::exit(kExitError);
}

struct VerifyOptions {
  std::string scene_path;
  std::string plan_path;
  std::string agent;
  std::string out_path;
  std::string debug_dir;
  std::string parts_path;
  std::string zones_path;
  VerificationConfig cfg;
};

int run_verify(const VerifyOptions& opt) {
  const LoadedScene loaded = load_scene(opt.scene_path);
  for (const std::string& warning : loaded.warnings)
    std::cerr << "warning: " << warning << "\n";

  const Plan plan = load_plan(opt.plan_path);
  const AgentProfile profile = resolve_agent(opt.agent);

  std::optional<FixturePartProvider> parts;
  if (!opt.parts_path.empty())
    parts.emplace(load_part_fixtures(opt.parts_path));
  std::optional<AnnotationResolver> zones;
  if (!opt.zones_path.empty())
    zones.emplace(load_zone_annotations(opt.zones_path), opt.cfg.zone_depth,
                  opt.cfg.zone_flare);

  std::vector<StepDebug> debug;
  const DiagnosticReport report = ground_plan_debug(
      plan, loaded.scene, profile, opt.cfg,
      opt.debug_dir.empty() ? nullptr : &debug,
      zones.has_value() ? &*zones : nullptr,
      parts.has_value() ? &*parts : nullptr);

  save_report(report, opt.out_path);

  if (!opt.debug_dir.empty()) {
    fs::create_directories(opt.debug_dir);
    const NavMap map = label_regions(build_navmap(
        loaded.scene, profile, opt.cfg.resolution, opt.cfg.mesh_silhouette_footprints));
    render_navmap(map, fs::path(opt.debug_dir) / "navmap.pgm");
    render_regions(map, fs::path(opt.debug_dir) / "regions.pgm");
    for (std::size_t t = 0; t < debug.size(); ++t) {
      std::vector<GridIndex> pixels;
      Json boxes = Json::array();
      for (const InteractionZone& zone : debug[t].zones) {
        const auto zone_pixels = rasterize_convex_polygon(
            map, zone.polygon.data(), zone.polygon.size());
        pixels.insert(pixels.end(), zone_pixels.begin(), zone_pixels.end());
      }
      for (const ClearanceBox& cb : debug[t].clearance_boxes) {
        Json box;
        box["face"] = to_string(cb.zone_face);
        box["center"] = {cb.box.center.x(), cb.box.center.y(), cb.box.center.z()};
        box["half_extents"] = {cb.box.half_extents.x(), cb.box.half_extents.y(),
                               cb.box.half_extents.z()};
        box["yaw"] = cb.box.yaw;
        boxes.push_back(std::move(box));
      }
      const std::string stem = "step_" + std::to_string(t + 1);
      if (!pixels.empty())
        render_mask(map, pixels, fs::path(opt.debug_dir) / (stem + "_zones.pgm"));
      if (!boxes.empty()) {
        std::ofstream out(fs::path(opt.debug_dir) / (stem + "_clearance.json"));
        out << boxes.dump(2) << "\n";
      }
    }
  }
  return report.overall_success ? kExitPass : kExitFail;
}

int run_navmap(const std::string& scene_path, const std::string& agent,
               int resolution, const std::string& out_path, bool regions,
               bool mesh_silhouettes) {
  const LoadedScene loaded = load_scene(scene_path);
  const AgentProfile profile = resolve_agent(agent);
  NavMap map = build_navmap(loaded.scene, profile, resolution, mesh_silhouettes);
  if (regions) {
    map = label_regions(std::move(map));
    render_regions(map, out_path);
  } else {
    render_navmap(map, out_path);
  }
  return kExitPass;
}

Json metrics_section(const TaskMetrics& metrics, bool with_actions) {
  Json section;
  if (with_actions) section["action_accuracy"] = metrics.action_accuracy;
  section["accuracy"] = metrics.accuracy;
  section["fp"] = metrics.fp_rate;
  section["mcc"] = metrics.mcc;
  section["ingap"] = metrics.ingap;
  if (metrics.hsi.has_value()) {
    section["hsi"] = *metrics.hsi;
  } else {
    section["hsi"] = nullptr;
  }
  return section;
}

int run_metrics(const std::string& labels_path, const std::string& direct_path,
                const std::string& decomposed_path, const std::string& out_path) {
  const auto labels = load_labels_jsonl(labels_path);
  Json out;
  std::optional<std::vector<PredictionRecord>> direct;
  std::optional<std::vector<PredictionRecord>> decomposed;
  if (!direct_path.empty()) {
    direct = load_predictions_jsonl(direct_path, PredictionMode::direct);
    out["direct"] = metrics_section(task_metrics(labels, *direct), false);
  }
  if (!decomposed_path.empty()) {
    decomposed = load_predictions_jsonl(decomposed_path, PredictionMode::decomposed);
    out["decomposed"] = metrics_section(task_metrics(labels, *decomposed), true);
  }
  if (direct.has_value() && decomposed.has_value())
    out["consistency"] = consistency(*direct, *decomposed);

  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ParseError("cannot write file: " + out_path);
  file << out.dump(2) << "\n";
  return kExitPass;
}

int run_reward(const std::string& labels_path, const std::string& completions_path,
               const std::string& out_path, double epsilon) {
  const auto labels = load_labels_jsonl(labels_path);
  const auto completions = load_completions_jsonl(completions_path);

  std::map<std::string, const LabelRecord*> by_id;
  for (const LabelRecord& label : labels) by_id[label.task_id] = &label;

  std::vector<Json> rows;
  std::vector<double> totals;
  std::map<std::int64_t, std::vector<std::size_t>> groups;
  rows.reserve(completions.size());
  for (std::size_t i = 0; i < completions.size(); ++i) {
    const CompletionRecord& record = completions[i];
    const auto it = by_id.find(record.task_id);
    if (it == by_id.end())
      throw DataError("completion without matching label: " + record.task_id);
    const LabelRecord& label = *it->second;
    std::optional<PropertyKind> failing;
    if (!label.failing_properties.empty()) failing = label.failing_properties.front();

    const RewardBreakdown reward =
        grpo_reward(record.completion, label.task_label, failing);
    Json row;
    row["task_id"] = record.task_id;
    row["r_format"] = reward.r_format;
    row["r_correct"] = reward.r_correct;
    row["r_spatial"] = reward.r_spatial;
    row["total"] = reward.total;
    if (reward.parsed_answer.has_value()) {
      row["parsed_answer"] = *reward.parsed_answer;
    } else {
      row["parsed_answer"] = nullptr;
    }
    row["matched_keywords"] = reward.matched_keywords;
    if (record.group.has_value()) {
      row["group"] = *record.group;
      groups[*record.group].push_back(i);
    }
    rows.push_back(std::move(row));
    totals.push_back(reward.total);
  }

  // Group-relative advantages for completions sampled in groups.
  for (const auto& [group, indices] : groups) {
    std::vector<double> rewards;
    rewards.reserve(indices.size());
    for (const std::size_t i : indices) rewards.push_back(totals[i]);
    const std::vector<double> advantages = group_advantage(rewards, epsilon);
    for (std::size_t k = 0; k < indices.size(); ++k)
      rows[indices[k]]["advantage"] = advantages[k];
  }

  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ParseError("cannot write file: " + out_path);
  for (const Json& row : rows) file << row.dump() << "\n";
  return kExitPass;
}

int run_audit_cmd(const std::string& manifest_path, const std::string& out_path,
                  int workers) {
  const AuditManifest manifest = load_manifest(manifest_path);
  const Json summary = run_audit(manifest, workers);
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ParseError("cannot write file: " + out_path);
  file << summary.dump(2) << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-aware plan feasibility verification for 3D indoor scenes"};
  app.require_subcommand(1);

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand(
      "verify", "Verify a plan against a scene for an agent profile");
  verify->add_option("--scene", verify_opt.scene_path, "Scene JSON")->required();
  verify->add_option("--plan", verify_opt.plan_path, "Plan JSON")->required();
  verify->add_option("--agent", verify_opt.agent,
                     "Built-in profile name or profile JSON path")->required();
  verify->add_option("--seed", verify_opt.cfg.seed, "RNG seed");
  verify->add_option("--out", verify_opt.out_path, "Report output path")->required();
  verify->add_option("--debug-dir", verify_opt.debug_dir,
                     "Directory for navmap/zone/clearance debug artifacts");
  verify->add_option("--resolution", verify_opt.cfg.resolution, "Grid resolution");
  verify->add_option("--zone-depth", verify_opt.cfg.zone_depth,
                     "Interaction zone depth (m)");
  verify->add_option("--zone-flare", verify_opt.cfg.zone_flare,
                     "Outer-edge widening factor (>= 1)");
  verify->add_option("--vis-threshold", verify_opt.cfg.visibility.threshold,
                     "Visibility ratio threshold");
  verify->add_option("--vis-eyes", verify_opt.cfg.visibility.eye_samples,
                     "Eye sample count");
  verify->add_option("--vis-jitter", verify_opt.cfg.visibility.eye_jitter_radius,
                     "Eye jitter radius (m)");
  verify->add_flag("--strict-containment",
                   verify_opt.cfg.clearance_full_containment,
                   "Require the full clearance footprint over the floor");
  verify->add_flag("--mesh-silhouettes", verify_opt.cfg.mesh_silhouette_footprints,
                   "Rasterize obstacle footprints from mesh silhouettes");
  verify->add_flag("--area-weighted", verify_opt.cfg.area_weighted_sampling,
                   "Area-weighted surface sampling for reach targets");
  verify->add_option("--parts", verify_opt.parts_path,
                     "Functional-part fixture JSON");
  verify->add_option("--zones", verify_opt.zones_path,
                     "Zone annotation JSON (category/action -> faces)");

  std::string nav_scene, nav_agent, nav_out;
  int nav_resolution = 256;
  bool nav_regions = false;
  bool nav_silhouettes = false;
  auto* navmap_cmd = app.add_subcommand("navmap", "Export a walkability map as PGM");
  navmap_cmd->add_option("--scene", nav_scene, "Scene JSON")->required();
  navmap_cmd->add_option("--agent", nav_agent, "Agent profile")->required();
  navmap_cmd->add_option("--resolution", nav_resolution, "Grid resolution");
  navmap_cmd->add_option("--out", nav_out, "Output PGM path")->required();
  navmap_cmd->add_flag("--regions", nav_regions, "Render region labels instead");
  navmap_cmd->add_flag("--mesh-silhouettes", nav_silhouettes,
                       "Rasterize obstacle footprints from mesh silhouettes");

  std::string met_labels, met_direct, met_decomposed, met_out;
  auto* metrics_cmd =
      app.add_subcommand("metrics", "Benchmark metrics from prediction files");
  metrics_cmd->add_option("--labels", met_labels, "Label JSONL")->required();
  metrics_cmd->add_option("--direct", met_direct, "Direct predictions JSONL");
  metrics_cmd->add_option("--decomposed", met_decomposed,
                          "Decomposed predictions JSONL");
  metrics_cmd->add_option("--out", met_out, "Metrics JSON output")->required();

  std::string rew_labels, rew_completions, rew_out;
  double rew_epsilon = 1e-4;
  auto* reward_cmd =
      app.add_subcommand("reward", "Per-completion rewards and group advantages");
  reward_cmd->add_option("--labels", rew_labels, "Label JSONL")->required();
  reward_cmd->add_option("--completions", rew_completions, "Completions JSONL")
      ->required();
  reward_cmd->add_option("--out", rew_out, "Reward JSONL output")->required();
  reward_cmd->add_option("--epsilon", rew_epsilon, "Advantage epsilon");

  std::string audit_manifest, audit_out;
  int audit_workers = 1;
  auto* audit_cmd =
      app.add_subcommand("audit", "Batch-verify a manifest of runs");
  audit_cmd->add_option("--manifest", audit_manifest, "Manifest JSON")->required();
  audit_cmd->add_option("--out", audit_out, "Summary JSON output")->required();
  audit_cmd->add_option("--workers", audit_workers, "Worker thread count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return run_verify(verify_opt);
    if (navmap_cmd->parsed())
      return run_navmap(nav_scene, nav_agent, nav_resolution, nav_out,
                        nav_regions, nav_silhouettes);
    if (metrics_cmd->parsed()) {
      if (met_direct.empty() && met_decomposed.empty())
        throw ParseError("metrics requires --direct and/or --decomposed");
      return run_metrics(met_labels, met_direct, met_decomposed, met_out);
    }
    if (reward_cmd->parsed())
      return run_reward(rew_labels, rew_completions, rew_out, rew_epsilon);
    if (audit_cmd->parsed())
      return run_audit_cmd(audit_manifest, audit_out, audit_workers);
  } catch (const SchemaError& err) {
    fail_with("schema", err);
  } catch (const ParseError& err) {
    fail_with("parse", err);
  } catch (const PlanError& err) {
    fail_with("plan", err);
  } catch (const SceneError& err) {
    fail_with("scene", err);
  } catch (const DataError& err) {
    fail_with("data", err);
  } catch (const ArgumentError& err) {
    fail_with("argument", err);
  } catch (const std::exception& err) {
    fail_with("internal", err);
  }
  return kExitError;
}
