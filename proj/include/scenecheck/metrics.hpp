#pragma once

#include "scenecheck/scene.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scenecheck {

/// Inconsistent or unmatched evaluation records.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Ground-truth feasibility for one task: the task label is the conjunction
/// of its per-action labels.
struct LabelRecord {
  std::string task_id;
  std::string agent_name;
  int step_count = 0;
  bool task_label = false;
  std::vector<bool> action_labels;
  std::vector<PropertyKind> failing_properties;  // optional, per failed action
};

enum class PredictionMode { direct, decomposed };

struct PredictionRecord {
  std::string task_id;
  PredictionMode mode = PredictionMode::direct;
  std::optional<bool> task_pred;   // direct
  std::vector<bool> action_preds;  // decomposed
};

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

/// Matthews correlation coefficient; 0.0 when any denominator factor
/// vanishes.
double mcc(const ConfusionCounts& counts);

struct TaskMetrics {
  double accuracy = 0.0;
  double fp_rate = 0.0;  // FP / (FP + TN): infeasible tasks judged feasible
  double mcc = 0.0;
  std::optional<double> hsi;  // 100 * long-horizon / short-horizon accuracy
  double ingap = 0.0;         // max accuracy spread across agent profiles
  double action_accuracy = 0.0;
  std::int64_t action_total = 0;  // 0 for direct predictions
  ConfusionCounts confusion;
};

/// Task-level metrics over matched (label, prediction) pairs. Decomposed
/// predictions are reduced to a task verdict by conjunction first. Horizon
/// buckets: short = 1-2 steps, long = 3+.
TaskMetrics task_metrics(const std::vector<LabelRecord>& labels,
                         const std::vector<PredictionRecord>& predictions);

/// Task verdict implied by per-action predictions: feasible only when every
/// action is.
bool decomposed_conclusion(const std::vector<bool>& action_preds);

/// Percentage of tasks whose direct verdict matches the conjunction of their
/// decomposed predictions. Both sets must cover the same task ids.
double consistency(const std::vector<PredictionRecord>& direct,
                   const std::vector<PredictionRecord>& decomposed);

struct ParsedCompletion {
  std::string think;
  std::optional<bool> answer;
  bool format_ok = false;
  bool placeholder = false;
};

/// Pulls the first <think>/<answer> tag pair out of a completion. The answer
/// parses case-insensitively as true/false; `placeholder` flags completions
/// that echo the prompt's literal example reasoning text.
ParsedCompletion parse_completion(const std::string& text);

struct RewardBreakdown {
  double r_format = 0.0;
  double r_correct = 0.0;
  double r_spatial = 0.0;
  double total = 0.0;
  std::optional<bool> parsed_answer;
  std::vector<std::string> matched_keywords;
};

/// Cumulative completion reward: +0.5 for a well-formed template, +3.0/+2.0
/// for correct false/true verdicts, +1.0 when a correctly rejected sample's
/// reasoning names the failing geometric property, and a flat -1.0 when the
/// completion reproduces the placeholder text (which short-circuits the other
/// components).
RewardBreakdown grpo_reward(const std::string& completion, bool label,
                            std::optional<PropertyKind> failing_property);

/// Keywords that credit the spatial-reasoning reward for a failing property.
/// Visibility has no keyword row and yields an empty list.
const std::vector<std::string>& spatial_keywords(PropertyKind property);

/// Group-relative advantages: (r - mean) / (stddev + epsilon) with the
/// population standard deviation.
std::vector<double> group_advantage(const std::vector<double>& rewards,
                                    double epsilon = 1e-4);

}  // namespace scenecheck
