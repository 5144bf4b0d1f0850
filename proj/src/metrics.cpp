#include "scenecheck/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>

namespace scenecheck {

namespace {

std::string to_lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return text;
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::optional<std::string> extract_tag(const std::string& text,
                                       const std::string& tag) {
  const std::string open = "<" + tag + ">";
  const std::string close = "</" + tag + ">";
  const auto start = text.find(open);
  if (start == std::string::npos) return std::nullopt;
  const auto body = start + open.size();
  const auto end = text.find(close, body);
  if (end == std::string::npos) return std::nullopt;
  return text.substr(body, end - body);
}

bool task_verdict(const PredictionRecord& prediction) {
  if (prediction.mode == PredictionMode::direct) {
    if (!prediction.task_pred.has_value())
      throw DataError("direct prediction without task_pred: " +
                      prediction.task_id);
    return *prediction.task_pred;
  }
  return decomposed_conclusion(prediction.action_preds);
}

}  // namespace

double mcc(const ConfusionCounts& c) {
  const double tp = static_cast<double>(c.tp);
  const double tn = static_cast<double>(c.tn);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  const double d1 = tp + fp;
  const double d2 = tp + fn;
  const double d3 = tn + fp;
  const double d4 = tn + fn;
  if (d1 == 0.0 || d2 == 0.0 || d3 == 0.0 || d4 == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(d1 * d2 * d3 * d4);
}

bool decomposed_conclusion(const std::vector<bool>& action_preds) {
  if (action_preds.empty())
    throw ArgumentError("decomposed_conclusion: empty prediction vector");
  return std::all_of(action_preds.begin(), action_preds.end(),
                     [](bool b) { return b; });
}

TaskMetrics task_metrics(const std::vector<LabelRecord>& labels,
                         const std::vector<PredictionRecord>& predictions) {
  std::unordered_map<std::string, const LabelRecord*> by_id;
  by_id.reserve(labels.size());
  for (const LabelRecord& label : labels) by_id[label.task_id] = &label;

  TaskMetrics metrics;
  std::int64_t correct = 0;
  std::int64_t total = 0;
  std::int64_t short_correct = 0, short_total = 0;
  std::int64_t long_correct = 0, long_total = 0;
  std::int64_t action_correct = 0;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> per_agent;

  for (const PredictionRecord& prediction : predictions) {
    const auto it = by_id.find(prediction.task_id);
    if (it == by_id.end())
      throw DataError("prediction without matching label: " + prediction.task_id);
    const LabelRecord& label = *it->second;

    const bool verdict = task_verdict(prediction);
    const bool hit = verdict == label.task_label;
    ++total;
    correct += hit;

    if (label.task_label && verdict) ++metrics.confusion.tp;
    if (label.task_label && !verdict) ++metrics.confusion.fn;
    if (!label.task_label && verdict) ++metrics.confusion.fp;
    if (!label.task_label && !verdict) ++metrics.confusion.tn;

    if (label.step_count >= 3) {
      ++long_total;
      long_correct += hit;
    } else {
      ++short_total;
      short_correct += hit;
    }

    auto& agent = per_agent[label.agent_name];
    ++agent.second;
    agent.first += hit;

    if (prediction.mode == PredictionMode::decomposed) {
      if (prediction.action_preds.size() != label.action_labels.size())
        throw DataError("action prediction count mismatch for task " +
                        prediction.task_id);
      for (std::size_t i = 0; i < prediction.action_preds.size(); ++i) {
        ++metrics.action_total;
        action_correct += prediction.action_preds[i] == label.action_labels[i];
      }
    }
  }

  if (total == 0) throw DataError("task_metrics: no predictions");

  metrics.accuracy = static_cast<double>(correct) / total;
  const std::int64_t negatives = metrics.confusion.fp + metrics.confusion.tn;
  metrics.fp_rate =
      negatives > 0 ? static_cast<double>(metrics.confusion.fp) / negatives : 0.0;
  metrics.mcc = mcc(metrics.confusion);

  if (short_total > 0 && long_total > 0 && short_correct > 0) {
    const double short_acc = static_cast<double>(short_correct) / short_total;
    const double long_acc = static_cast<double>(long_correct) / long_total;
    metrics.hsi = 100.0 * long_acc / short_acc;
  }

  double best = 0.0, worst = 1.0;
  for (const auto& [name, counts] : per_agent) {
    const double acc = static_cast<double>(counts.first) / counts.second;
    best = std::max(best, acc);
    worst = std::min(worst, acc);
  }
  metrics.ingap = per_agent.size() > 1 ? best - worst : 0.0;

  metrics.action_accuracy =
      metrics.action_total > 0
          ? static_cast<double>(action_correct) / metrics.action_total
          : 0.0;
  return metrics;
}

double consistency(const std::vector<PredictionRecord>& direct,
                   const std::vector<PredictionRecord>& decomposed) {
  std::unordered_map<std::string, bool> direct_verdicts;
  direct_verdicts.reserve(direct.size());
  for (const PredictionRecord& prediction : direct)
    direct_verdicts[prediction.task_id] = task_verdict(prediction);

  if (direct_verdicts.size() != decomposed.size())
    throw DataError("consistency: direct and decomposed task sets differ");
  if (decomposed.empty()) throw DataError("consistency: no predictions");

  std::int64_t matches = 0;
  for (const PredictionRecord& prediction : decomposed) {
    const auto it = direct_verdicts.find(prediction.task_id);
    if (it == direct_verdicts.end())
      throw DataError("consistency: no direct prediction for task " +
                      prediction.task_id);
    matches += it->second == task_verdict(prediction);
  }
  return 100.0 * static_cast<double>(matches) / decomposed.size();
}

ParsedCompletion parse_completion(const std::string& text) {
  ParsedCompletion parsed;
  const auto think = extract_tag(text, "think");
  const auto answer_text = extract_tag(text, "answer");
  if (think.has_value()) {
    parsed.think = *think;
    parsed.placeholder = trim(*think) == "reasoning process here";
  }
  if (answer_text.has_value()) {
    const std::string value = to_lower(trim(*answer_text));
    if (value == "true") parsed.answer = true;
    if (value == "false") parsed.answer = false;
  }
  parsed.format_ok =
      think.has_value() && answer_text.has_value() && parsed.answer.has_value();
  return parsed;
}

const std::vector<std::string>& spatial_keywords(PropertyKind property) {
  static const std::vector<std::string> navigable = {
      "path", "walk", "navigate", "access", "blocked", "way", "stuck"};
  static const std::vector<std::string> reachable = {
      "reach", "distance", "too far", "height", "arm", "long", "short", "touch"};
  static const std::vector<std::string> interactable = {
      "handle", "grip", "part", "grasp", "rim", "side"};
  static const std::vector<std::string> clearance = {
      "clearance", "blocked", "fit", "narrow", "collision", "hit", "space",
      "swing"};
  static const std::vector<std::string> none;

  switch (property) {
    case PropertyKind::navigable: return navigable;
    case PropertyKind::reachable: return reachable;
    case PropertyKind::interactable: return interactable;
    case PropertyKind::clearance: return clearance;
    case PropertyKind::visible: return none;
  }
  return none;
}

RewardBreakdown grpo_reward(const std::string& completion, bool label,
                            std::optional<PropertyKind> failing_property) {
  const ParsedCompletion parsed = parse_completion(completion);

  RewardBreakdown reward;
  reward.parsed_answer = parsed.answer;
  if (parsed.placeholder) {
    reward.total = -1.0;  // penalty short-circuits the other components
    return reward;
  }

  reward.r_format = parsed.format_ok ? 0.5 : 0.0;
  if (parsed.answer.has_value() && *parsed.answer == label) {
    reward.r_correct = label ? 2.0 : 3.0;
  }

  if (failing_property.has_value()) {
    const std::string think = to_lower(parsed.think);
    for (const std::string& keyword : spatial_keywords(*failing_property)) {
      if (think.find(keyword) != std::string::npos)
        reward.matched_keywords.push_back(keyword);
    }
  }
  const bool correct_false = !label && parsed.answer.has_value() &&
                             *parsed.answer == false;
  if (correct_false && failing_property.has_value() &&
      !reward.matched_keywords.empty()) {
    reward.r_spatial = 1.0;
  }

  reward.total = reward.r_format + reward.r_correct + reward.r_spatial;
  return reward;
}

std::vector<double> group_advantage(const std::vector<double>& rewards,
                                    double epsilon) {
  if (rewards.empty()) throw ArgumentError("group_advantage: empty group");
  if (epsilon <= 0.0) throw ArgumentError("group_advantage: epsilon must be > 0");

  double mean = 0.0;
  for (const double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());

  double variance = 0.0;
  for (const double r : rewards) variance += (r - mean) * (r - mean);
  variance /= static_cast<double>(rewards.size());
  const double stddev = std::sqrt(variance);

  std::vector<double> advantages;
  advantages.reserve(rewards.size());
  for (const double r : rewards) advantages.push_back((r - mean) / (stddev + epsilon));
  return advantages;
}

}  // namespace scenecheck
