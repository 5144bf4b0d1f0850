#include "scenecheck/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace scenecheck {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json parse_json_file(const fs::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

void write_file_binary(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write file: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError("write failed: " + path.string());
}

Vec3 vec3_from_json(const Json& value, const std::string& what,
                    std::vector<std::string>& violations) {
  if (!value.is_array() || value.size() != 3 ||
      !std::all_of(value.begin(), value.end(),
                   [](const Json& v) { return v.is_number(); })) {
    violations.push_back(what + " must be a numeric [x, y, z] triple");
    return Vec3::Zero();
  }
  return {value[0].get<double>(), value[1].get<double>(), value[2].get<double>()};
}

TriangleMesh mesh_from_spec(const Json& spec, const fs::path& base_dir,
                            const std::string& what,
                            std::vector<std::string>& violations) {
  TriangleMesh mesh;
  if (spec.is_string()) {
    const fs::path mesh_path = base_dir / spec.get<std::string>();
    if (!fs::exists(mesh_path)) {
      violations.push_back(what + ": mesh file not found: " + mesh_path.string());
      return mesh;
    }
    try {
      return load_obj(mesh_path);
    } catch (const std::exception& err) {
      violations.push_back(what + ": " + err.what());
      return mesh;
    }
  }

  if (!spec.is_object() || !spec.contains("vertices") || !spec.contains("triangles")) {
    violations.push_back(what +
                         " must be an OBJ path or {vertices, triangles} object");
    return mesh;
  }
  for (const Json& v : spec["vertices"]) {
    mesh.vertices.push_back(vec3_from_json(v, what + " vertex", violations));
  }
  for (const Json& t : spec["triangles"]) {
    if (!t.is_array() || t.size() != 3) {
      violations.push_back(what + " triangle must be an [a, b, c] index triple");
      continue;
    }
    std::array<std::uint32_t, 3> tri{};
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      const auto idx = t[i].get<std::int64_t>();
      if (idx < 0 || idx >= static_cast<std::int64_t>(mesh.vertices.size())) {
        violations.push_back(what + " triangle index out of range");
        ok = false;
        break;
      }
      tri[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(idx);
    }
    if (ok) mesh.triangles.push_back(tri);
  }
  return mesh;
}

// Soft check from the scene invariants: meshes should stay inside their OBB
// inflated by the tolerance.
std::optional<double> mesh_obb_excess(const TriangleMesh& mesh,
                                      const OrientedBox& obb, double tolerance) {
  const Eigen::Matrix3d inv = obb.rotation().transpose();
  double worst = 0.0;
  for (const Vec3& v : mesh.vertices) {
    const Vec3 local = inv * (v - obb.center);
    const Vec3 excess = local.cwiseAbs() - obb.half_extents;
    worst = std::max(worst, excess.maxCoeff());
  }
  if (worst > tolerance) return worst;
  return std::nullopt;
}

std::string pgm_header(const NavMap& map) {
  char comment[128];
  std::snprintf(comment, sizeof(comment), "# scale %.9g m/px origin %.9g %.9g",
                map.scale, map.origin.x(), map.origin.y());
  std::ostringstream header;
  header << "P5\n"
         << comment << "\n"
         << map.grid.cols() << " " << map.grid.rows() << "\n255\n";
  return header.str();
}

}  // namespace

SchemaError::SchemaError(std::string context, std::vector<std::string> violations)
    : std::runtime_error(context + ": " +
                         [&violations] {
                           std::string joined;
                           for (std::size_t i = 0; i < violations.size(); ++i) {
                             if (i > 0) joined += "; ";
                             joined += violations[i];
                           }
                           return joined;
                         }()),
      violations_(std::move(violations)) {}

TriangleMesh load_obj(const fs::path& path, std::size_t* dropped_degenerate) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open OBJ file: " + path.string());

  TriangleMesh mesh;
  std::size_t dropped = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string record;
    if (!(tokens >> record)) continue;
    if (record == "v") {
      double x, y, z;
      if (!(tokens >> x >> y >> z))
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": malformed vertex record");
      mesh.vertices.emplace_back(x, y, z);
    } else if (record == "f") {
      std::vector<std::uint32_t> face;
      std::string corner;
      while (tokens >> corner) {
        // "idx", "idx/t", "idx//n", "idx/t/n"; negative = from the end.
        const std::string index_text = corner.substr(0, corner.find('/'));
        long idx;
        try {
          idx = std::stol(index_text);
        } catch (const std::exception&) {
          throw ParseError(path.string() + ":" + std::to_string(line_no) +
                           ": malformed face index '" + corner + "'");
        }
        const long count = static_cast<long>(mesh.vertices.size());
        const long resolved = idx > 0 ? idx - 1 : count + idx;
        if (resolved < 0 || resolved >= count)
          throw ParseError(path.string() + ":" + std::to_string(line_no) +
                           ": face index out of range");
        face.push_back(static_cast<std::uint32_t>(resolved));
      }
      if (face.size() < 3)
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": face with fewer than 3 vertices");
      for (std::size_t i = 1; i + 1 < face.size(); ++i) {
        const std::array<std::uint32_t, 3> tri = {face[0], face[i], face[i + 1]};
        if (triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                          mesh.vertices[tri[2]]) <= 1e-12) {
          ++dropped;
          continue;
        }
        mesh.triangles.push_back(tri);
      }
    }
    // Other records (vn, vt, usemtl, ...) are ignored.
  }
  if (dropped_degenerate != nullptr) *dropped_degenerate = dropped;
  return mesh;
}

LoadedScene scene_from_json(const Json& doc, const fs::path& base_dir,
                            const std::string& context,
                            double mesh_obb_tolerance) {
  std::vector<std::string> violations;
  LoadedScene loaded;
  Scene& scene = loaded.scene;

  if (!doc.is_object()) {
    throw SchemaError(context, {"scene document must be a JSON object"});
  }
  scene.id = doc.value("id", std::string{});
  if (scene.id.empty()) violations.push_back("missing scene id");

  if (!doc.contains("floor")) {
    violations.push_back("missing floor geometry");
  } else {
    scene.floor = mesh_from_spec(doc["floor"], base_dir, "floor", violations);
    if (scene.floor.empty()) violations.push_back("floor mesh is empty");
  }

  if (doc.contains("walls")) {
    if (!doc["walls"].is_array()) {
      violations.push_back("walls must be an array of mesh specs");
    } else {
      for (std::size_t i = 0; i < doc["walls"].size(); ++i) {
        scene.walls.push_back(mesh_from_spec(
            doc["walls"][i], base_dir, "walls[" + std::to_string(i) + "]",
            violations));
      }
    }
  }

  std::vector<std::string> seen_ids;
  for (const Json& entry : doc.value("objects", Json::array())) {
    SceneObject object;
    object.id = entry.value("id", std::string{});
    object.category = entry.value("category", std::string{});
    if (object.id.empty()) {
      violations.push_back("object with missing id");
      continue;
    }
    if (std::find(seen_ids.begin(), seen_ids.end(), object.id) != seen_ids.end())
      violations.push_back("duplicate object id '" + object.id + "'");
    seen_ids.push_back(object.id);

    const std::string what = "object '" + object.id + "'";
    if (entry.contains("rotation") || entry.contains("quaternion")) {
      violations.push_back(what +
                           ": only yaw rotation is supported; use the 'yaw' "
                           "field (radians about the vertical axis)");
    }
    if (!entry.contains("position") || !entry.contains("size")) {
      violations.push_back(what + ": position and size are required");
      continue;
    }
    object.obb.center = vec3_from_json(entry["position"], what + " position",
                                       violations);
    const Vec3 size = vec3_from_json(entry["size"], what + " size", violations);
    if (size.minCoeff() <= 0.0) {
      violations.push_back(what + ": size components must be > 0");
      continue;
    }
    object.obb.half_extents = size / 2.0;
    object.obb.yaw = entry.value("yaw", 0.0);

    if (entry.contains("mesh")) {
      TriangleMesh mesh =
          mesh_from_spec(entry["mesh"], base_dir, what + " mesh", violations);
      if (!mesh.empty()) {
        if (const auto excess =
                mesh_obb_excess(mesh, object.obb, mesh_obb_tolerance)) {
          char buf[160];
          std::snprintf(buf, sizeof(buf),
                        "%s: mesh extends %.3f m beyond its OBB (tolerance %.2f m)",
                        what.c_str(), *excess, mesh_obb_tolerance);
          loaded.warnings.emplace_back(buf);
        }
        object.mesh = std::move(mesh);
      }
    }
    scene.objects.push_back(std::move(object));
  }

  if (!violations.empty()) throw SchemaError(context, std::move(violations));
  return loaded;
}

LoadedScene load_scene(const fs::path& path, double mesh_obb_tolerance) {
  return scene_from_json(parse_json_file(path), path.parent_path(), path.string(),
                         mesh_obb_tolerance);
}

Plan load_plan(const fs::path& path) {
  const Json doc = parse_json_file(path);
  std::vector<std::string> violations;
  Plan plan;
  if (!doc.is_object()) throw SchemaError(path.string(), {"plan must be a JSON object"});
  plan.agent = doc.value("agent", std::string{});
  plan.task = doc.value("task", std::string{});
  if (!doc.contains("steps") || !doc["steps"].is_array()) {
    violations.push_back("missing steps array");
  } else {
    for (std::size_t i = 0; i < doc["steps"].size(); ++i) {
      const Json& entry = doc["steps"][i];
      const std::string what = "steps[" + std::to_string(i) + "]";
      PlanStep step;
      try {
        step.action = action_from_string(entry.value("action", std::string{}));
      } catch (const ArgumentError& err) {
        violations.push_back(what + ": " + err.what());
        continue;
      }
      step.object_id = entry.value("object_id", std::string{});
      if (step.object_id.empty()) {
        violations.push_back(what + ": missing object_id");
        continue;
      }
      plan.steps.push_back(std::move(step));
    }
  }
  if (!violations.empty()) throw SchemaError(path.string(), std::move(violations));
  return plan;
}

AgentProfile profile_from_json(const Json& doc, const std::string& context) {
  std::vector<std::string> violations;
  AgentProfile profile;
  const auto require = [&](const char* key) -> double {
    if (!doc.contains(key) || !doc[key].is_number()) {
      violations.push_back(std::string("missing numeric field '") + key + "'");
      return 1.0;
    }
    return doc[key].get<double>();
  };
  profile.name = doc.value("name", std::string{});
  try {
    profile.locomotion =
        locomotion_from_string(doc.value("locomotion", std::string{}));
  } catch (const ArgumentError& err) {
    violations.emplace_back(err.what());
  }
  profile.clearance_width = require("clearance_width");
  profile.standing_shoulder_height = require("standing_shoulder_height");
  profile.shoulder_to_eye_offset = require("shoulder_to_eye_offset");
  profile.eye_to_top_offset = require("eye_to_top_offset");
  profile.crouch_factor = require("crouch_factor");
  profile.reach_radius = require("reach_radius");
  profile.posture_scale = require("posture_scale");
  if (!violations.empty()) throw SchemaError(context, std::move(violations));
  validate_profile(profile);
  return profile;
}

Json profile_to_json(const AgentProfile& profile) {
  Json doc;
  doc["name"] = profile.name;
  doc["locomotion"] = to_string(profile.locomotion);
  doc["clearance_width"] = profile.clearance_width;
  doc["standing_shoulder_height"] = profile.standing_shoulder_height;
  doc["shoulder_to_eye_offset"] = profile.shoulder_to_eye_offset;
  doc["eye_to_top_offset"] = profile.eye_to_top_offset;
  doc["crouch_factor"] = profile.crouch_factor;
  doc["reach_radius"] = profile.reach_radius;
  doc["posture_scale"] = profile.posture_scale;
  return doc;
}

AgentProfile load_profile(const fs::path& path) {
  return profile_from_json(parse_json_file(path), path.string());
}

void save_profile(const AgentProfile& profile, const fs::path& path) {
  write_file_binary(path, profile_to_json(profile).dump(2) + "\n");
}

AgentProfile resolve_agent(const std::string& name_or_path) {
  if (is_builtin_profile(name_or_path)) return builtin_profile(name_or_path);
  if (fs::exists(name_or_path)) return load_profile(name_or_path);
  throw ParseError("agent '" + name_or_path +
                   "' is neither a built-in profile (adult, child, wheelchair) "
                   "nor a profile file");
}

Json report_to_json(const DiagnosticReport& report) {
  Json doc;
  doc["scene_id"] = report.scene_id;
  doc["agent"] = report.agent_name;
  doc["task"] = report.task_text;
  doc["seed"] = report.seed;
  doc["overall_success"] = report.overall_success;
  doc["insight"] = report.insight;
  doc["steps"] = Json::array();
  for (const StepResult& step : report.steps) {
    Json step_doc;
    step_doc["action"] = to_string(step.action);
    step_doc["object_id"] = step.object_id;
    step_doc["success"] = step.success;
    step_doc["checks"] = Json::array();
    for (const CheckOutcome& outcome : step.trace) {
      Json check_doc;
      check_doc["property"] = to_string(outcome.property);
      check_doc["status"] = outcome.status;
      check_doc["message"] = outcome.message;
      check_doc["metrics"] = outcome.metrics;
      step_doc["checks"].push_back(std::move(check_doc));
    }
    doc["steps"].push_back(std::move(step_doc));
  }
  return doc;
}

DiagnosticReport report_from_json(const Json& doc) {
  DiagnosticReport report;
  report.scene_id = doc.at("scene_id").get<std::string>();
  report.agent_name = doc.at("agent").get<std::string>();
  report.task_text = doc.at("task").get<std::string>();
  report.seed = doc.at("seed").get<std::uint64_t>();
  report.overall_success = doc.at("overall_success").get<bool>();
  report.insight = doc.at("insight").get<std::string>();
  for (const Json& step_doc : doc.at("steps")) {
    StepResult step;
    step.action = action_from_string(step_doc.at("action").get<std::string>());
    step.object_id = step_doc.at("object_id").get<std::string>();
    step.success = step_doc.at("success").get<bool>();
    for (const Json& check_doc : step_doc.at("checks")) {
      CheckOutcome outcome;
      outcome.property =
          property_from_string(check_doc.at("property").get<std::string>());
      outcome.status = check_doc.at("status").get<bool>();
      outcome.message = check_doc.at("message").get<std::string>();
      outcome.metrics = check_doc.at("metrics");
      step.trace.push_back(std::move(outcome));
    }
    report.steps.push_back(std::move(step));
  }
  return report;
}

void save_report(const DiagnosticReport& report, const fs::path& path) {
  write_file_binary(path, report_to_json(report).dump(2) + "\n");
}

DiagnosticReport load_report(const fs::path& path) {
  try {
    return report_from_json(parse_json_file(path));
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

FixturePartProvider::CloudTable load_part_fixtures(const fs::path& path) {
  const Json doc = parse_json_file(path);
  FixturePartProvider::CloudTable table;
  std::vector<std::string> violations;
  for (const auto& [object_id, actions] : doc.items()) {
    for (const auto& [action, points] : actions.items()) {
      PointCloud3 cloud;
      for (const Json& p : points) {
        cloud.points.push_back(vec3_from_json(
            p, object_id + "/" + action + " point", violations));
      }
      table[{object_id, action}] = std::move(cloud);
    }
  }
  if (!violations.empty()) throw SchemaError(path.string(), std::move(violations));
  return table;
}

AnnotationResolver::FaceTable load_zone_annotations(const fs::path& path) {
  const Json doc = parse_json_file(path);
  AnnotationResolver::FaceTable table;
  std::vector<std::string> violations;
  for (const auto& [category, actions] : doc.items()) {
    for (const auto& [action, faces] : actions.items()) {
      std::vector<BoxFace> parsed;
      for (const Json& face : faces) {
        try {
          parsed.push_back(box_face_from_string(face.get<std::string>()));
        } catch (const ArgumentError& err) {
          violations.push_back(category + "/" + action + ": " + err.what());
        }
      }
      table[{category, action}] = std::move(parsed);
    }
  }
  if (!violations.empty()) throw SchemaError(path.string(), std::move(violations));
  return table;
}

void render_navmap(const NavMap& map, const fs::path& path) {
  std::string bytes = pgm_header(map);
  bytes.reserve(bytes.size() + static_cast<std::size_t>(map.grid.size()));
  for (Eigen::Index r = 0; r < map.grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < map.grid.cols(); ++c) {
      bytes.push_back(map.grid(r, c) ? static_cast<char>(255) : '\0');
    }
  }
  write_file_binary(path, bytes);
}

void render_regions(const NavMap& map, const fs::path& path) {
  if (!map.labeled())
    throw ArgumentError("render_regions: map is not labeled");
  const int max_label = std::max(1, map.region_count());
  std::string bytes = pgm_header(map);
  for (Eigen::Index r = 0; r < map.labels.rows(); ++r) {
    for (Eigen::Index c = 0; c < map.labels.cols(); ++c) {
      const int label = map.labels(r, c);
      bytes.push_back(static_cast<char>(label == 0 ? 0 : label * 255 / max_label));
    }
  }
  write_file_binary(path, bytes);
}

void render_mask(const NavMap& map, const std::vector<GridIndex>& pixels,
                 const fs::path& path) {
  NavMap::Grid mask = NavMap::Grid::Zero(map.grid.rows(), map.grid.cols());
  for (const GridIndex& px : pixels) mask(px.row, px.col) = 1;
  std::string bytes = pgm_header(map);
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      bytes.push_back(mask(r, c) ? static_cast<char>(255) : '\0');
    }
  }
  write_file_binary(path, bytes);
}

namespace {

std::vector<Json> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::vector<Json> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(Json::parse(line));
    } catch (const nlohmann::json::parse_error& err) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " +
                       err.what());
    }
  }
  return records;
}

}  // namespace

std::vector<LabelRecord> load_labels_jsonl(const fs::path& path) {
  std::vector<LabelRecord> labels;
  for (const Json& doc : read_jsonl(path)) {
    LabelRecord label;
    label.task_id = doc.at("task_id").get<std::string>();
    label.agent_name = doc.value("agent_name", std::string{});
    label.task_label = doc.at("task_label").get<bool>();
    if (doc.contains("action_labels")) {
      for (const Json& v : doc["action_labels"])
        label.action_labels.push_back(v.get<bool>());
    }
    label.step_count =
        doc.value("step_count", static_cast<int>(label.action_labels.size()));
    if (doc.contains("failing_properties")) {
      for (const Json& v : doc["failing_properties"])
        label.failing_properties.push_back(
            property_from_string(v.get<std::string>()));
    }
    if (!label.action_labels.empty()) {
      const bool conjunction =
          std::all_of(label.action_labels.begin(), label.action_labels.end(),
                      [](bool b) { return b; });
      if (conjunction != label.task_label)
        throw SchemaError(path.string(),
                          {"task " + label.task_id +
                           ": task_label must equal the conjunction of "
                           "action_labels"});
      if (label.step_count != static_cast<int>(label.action_labels.size()))
        throw SchemaError(path.string(),
                          {"task " + label.task_id +
                           ": step_count must match action_labels length"});
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

std::vector<PredictionRecord> load_predictions_jsonl(const fs::path& path,
                                                     PredictionMode mode) {
  std::vector<PredictionRecord> predictions;
  for (const Json& doc : read_jsonl(path)) {
    PredictionRecord prediction;
    prediction.task_id = doc.at("task_id").get<std::string>();
    prediction.mode = mode;
    if (mode == PredictionMode::direct) {
      prediction.task_pred = doc.at("task_pred").get<bool>();
    } else {
      for (const Json& v : doc.at("action_preds"))
        prediction.action_preds.push_back(v.get<bool>());
      if (prediction.action_preds.empty())
        throw SchemaError(path.string(), {"task " + prediction.task_id +
                                          ": empty action_preds"});
    }
    predictions.push_back(std::move(prediction));
  }
  return predictions;
}

std::vector<CompletionRecord> load_completions_jsonl(const fs::path& path) {
  std::vector<CompletionRecord> completions;
  for (const Json& doc : read_jsonl(path)) {
    CompletionRecord record;
    record.task_id = doc.at("task_id").get<std::string>();
    record.completion = doc.at("completion").get<std::string>();
    if (doc.contains("group")) record.group = doc["group"].get<std::int64_t>();
    completions.push_back(std::move(record));
  }
  return completions;
}

AuditManifest load_manifest(const fs::path& path) {
  const Json doc = parse_json_file(path);
  AuditManifest manifest;
  manifest.config.seed = doc.value("seed", std::uint64_t{0});
  manifest.config.resolution = doc.value("resolution", 256);
  const fs::path base = path.parent_path();
  if (!doc.contains("runs") || !doc["runs"].is_array())
    throw SchemaError(path.string(), {"manifest requires a runs array"});
  for (const Json& entry : doc["runs"]) {
    AuditRun run;
    run.scene_path = base / entry.at("scene").get<std::string>();
    run.plan_path = base / entry.at("plan").get<std::string>();
    run.agent = entry.at("agent").get<std::string>();
    manifest.runs.push_back(std::move(run));
  }
  return manifest;
}

Json run_audit(const AuditManifest& manifest, int workers) {
  struct RunOutcome {
    std::string agent;
    bool overall = false;
    std::string error;
    std::vector<std::pair<PropertyKind, bool>> checks;
  };

  std::vector<RunOutcome> outcomes(manifest.runs.size());
  std::atomic<std::size_t> cursor{0};

  const auto work = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= manifest.runs.size()) return;
      const AuditRun& run = manifest.runs[i];
      RunOutcome& outcome = outcomes[i];
      try {
        const AgentProfile profile = resolve_agent(run.agent);
        outcome.agent = profile.name;
        const LoadedScene loaded = load_scene(run.scene_path);
        const Plan plan = load_plan(run.plan_path);
        const DiagnosticReport report =
            ground_plan(plan, loaded.scene, profile, manifest.config);
        outcome.overall = report.overall_success;
        for (const StepResult& step : report.steps) {
          for (const CheckOutcome& check : step.trace)
            outcome.checks.emplace_back(check.property, check.status);
        }
      } catch (const std::exception& err) {
        outcome.agent = run.agent;
        outcome.error = err.what();
      }
    }
  };

  const int thread_count = std::max(1, workers);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(thread_count) - 1);
  for (int i = 1; i < thread_count; ++i) pool.emplace_back(work);
  work();
  for (std::thread& thread : pool) thread.join();

  // Single-writer aggregation in manifest order keeps the summary identical
  // for any worker count.
  struct Tally {
    std::int64_t pass = 0;
    std::int64_t total = 0;
  };
  std::map<std::string, Tally> task_success;
  std::map<std::string, std::map<std::string, Tally>> per_property;
  Json failures = Json::array();

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const RunOutcome& outcome = outcomes[i];
    if (!outcome.error.empty()) {
      Json failure;
      failure["run"] = static_cast<std::int64_t>(i);
      failure["agent"] = outcome.agent;
      failure["error"] = outcome.error;
      failures.push_back(std::move(failure));
      continue;
    }
    auto& tally = task_success[outcome.agent];
    ++tally.total;
    tally.pass += outcome.overall;
    for (const auto& [property, status] : outcome.checks) {
      auto& cell = per_property[to_string(property)][outcome.agent];
      ++cell.total;
      cell.pass += status;
    }
  }

  const auto tally_json = [](const Tally& tally) {
    Json cell;
    cell["pass"] = tally.pass;
    cell["total"] = tally.total;
    if (tally.total > 0) {
      cell["rate"] = static_cast<double>(tally.pass) / tally.total;
    } else {
      cell["rate"] = nullptr;
    }
    return cell;
  };

  Json summary;
  summary["runs"] = static_cast<std::int64_t>(manifest.runs.size());
  summary["task_success"] = Json::object();
  for (const auto& [agent, tally] : task_success)
    summary["task_success"][agent] = tally_json(tally);
  summary["properties"] = Json::object();
  for (const PropertyKind property :
       {PropertyKind::navigable, PropertyKind::reachable,
        PropertyKind::interactable, PropertyKind::clearance,
        PropertyKind::visible}) {
    const auto it = per_property.find(to_string(property));
    Json row = Json::object();
    if (it != per_property.end()) {
      for (const auto& [agent, tally] : it->second) row[agent] = tally_json(tally);
    }
    summary["properties"][to_string(property)] = std::move(row);
  }
  if (!failures.empty()) summary["failures"] = std::move(failures);
  return summary;
}

}  // namespace scenecheck
