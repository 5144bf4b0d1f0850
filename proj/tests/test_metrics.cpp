#include "scenecheck/metrics.hpp"
#include "scenecheck/rng.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace scenecheck;

namespace {

LabelRecord label(const std::string& id, const std::string& agent, bool value,
                  std::vector<bool> actions = {}) {
  LabelRecord record;
  record.task_id = id;
  record.agent_name = agent;
  record.task_label = value;
  record.action_labels = std::move(actions);
  record.step_count = record.action_labels.empty()
                          ? 1
                          : static_cast<int>(record.action_labels.size());
  return record;
}

PredictionRecord direct_pred(const std::string& id, bool value) {
  PredictionRecord prediction;
  prediction.task_id = id;
  prediction.mode = PredictionMode::direct;
  prediction.task_pred = value;
  return prediction;
}

PredictionRecord decomposed_pred(const std::string& id, std::vector<bool> preds) {
  PredictionRecord prediction;
  prediction.task_id = id;
  prediction.mode = PredictionMode::decomposed;
  prediction.action_preds = std::move(preds);
  return prediction;
}

}  // namespace

TEST_CASE("mcc: canonical values") {
  CHECK(mcc({3, 3, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mcc({1, 1, 1, 1}) == 0.0);
  // (6*2 - 2*2) / sqrt(8*8*4*4) = 8/32
  CHECK(mcc({6, 2, 2, 2}) == doctest::Approx(0.25).epsilon(1e-15));
  // Zero denominator factor: no positive predictions.
  CHECK(mcc({0, 5, 0, 5}) == 0.0);
}

TEST_CASE("mcc: oracle equivalence, bounds and label-swap invariance") {
  Rng rng(31337);
  for (int round = 0; round < 1000; ++round) {
    const ConfusionCounts counts{
        static_cast<std::int64_t>(rng.bounded(200)),
        static_cast<std::int64_t>(rng.bounded(200)),
        static_cast<std::int64_t>(rng.bounded(200)),
        static_cast<std::int64_t>(rng.bounded(200))};
    const double value = mcc(counts);
    const double expected =
        oracle::direct_mcc(counts.tp, counts.tn, counts.fp, counts.fn);
    CHECK(std::abs(value - expected) <= 1e-12);
    CHECK(value >= -1.0 - 1e-12);
    CHECK(value <= 1.0 + 1e-12);

    const ConfusionCounts swapped{counts.tn, counts.tp, counts.fn, counts.fp};
    CHECK(mcc(swapped) == value);
  }
}

TEST_CASE("task_metrics: perfect predictions") {
  std::vector<LabelRecord> labels;
  std::vector<PredictionRecord> predictions;
  for (int i = 0; i < 12; ++i) {
    const std::string id = "t" + std::to_string(i);
    const bool value = i % 3 != 0;
    LabelRecord record = label(id, i % 2 ? "adult" : "child", value);
    record.step_count = (i % 4) + 1;  // mixes the horizon buckets
    labels.push_back(record);
    predictions.push_back(direct_pred(id, value));
  }
  const TaskMetrics metrics = task_metrics(labels, predictions);
  CHECK(metrics.accuracy == 1.0);
  CHECK(metrics.fp_rate == 0.0);
  REQUIRE(metrics.hsi.has_value());
  CHECK(*metrics.hsi == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(metrics.ingap == 0.0);
}

TEST_CASE("task_metrics: horizon stability from bucket accuracies") {
  std::vector<LabelRecord> labels;
  std::vector<PredictionRecord> predictions;
  // Short bucket: 5 tasks, 4 correct (0.8). Long bucket: 25 tasks, 18 correct (0.72).
  int id = 0;
  for (int i = 0; i < 5; ++i) {
    const std::string task = "s" + std::to_string(id++);
    LabelRecord record = label(task, "adult", true);
    record.step_count = 2;
    labels.push_back(record);
    predictions.push_back(direct_pred(task, i < 4));
  }
  for (int i = 0; i < 25; ++i) {
    const std::string task = "l" + std::to_string(id++);
    LabelRecord record = label(task, "adult", true);
    record.step_count = 4;
    labels.push_back(record);
    predictions.push_back(direct_pred(task, i < 18));
  }
  const TaskMetrics metrics = task_metrics(labels, predictions);
  REQUIRE(metrics.hsi.has_value());
  CHECK(*metrics.hsi == doctest::Approx(90.0).epsilon(1e-12));
}

TEST_CASE("task_metrics: inclusivity gap is the max accuracy spread") {
  std::vector<LabelRecord> labels;
  std::vector<PredictionRecord> predictions;
  int id = 0;
  const auto add_group = [&](const std::string& agent, int correct, int total) {
    for (int i = 0; i < total; ++i) {
      const std::string task = agent + std::to_string(id++);
      labels.push_back(label(task, agent, true));
      predictions.push_back(direct_pred(task, i < correct));
    }
  };
  add_group("adult", 7, 10);       // 0.70
  add_group("child", 33, 50);      // 0.66
  add_group("wheelchair", 29, 50); // 0.58
  const TaskMetrics metrics = task_metrics(labels, predictions);
  CHECK(metrics.ingap == doctest::Approx(0.12).epsilon(1e-12));
}

TEST_CASE("task_metrics: fp rate counts infeasible tasks judged feasible") {
  std::vector<LabelRecord> labels = {label("a", "adult", false),
                                     label("b", "adult", false),
                                     label("c", "adult", false),
                                     label("d", "adult", true)};
  std::vector<PredictionRecord> predictions = {
      direct_pred("a", true), direct_pred("b", false), direct_pred("c", true),
      direct_pred("d", true)};
  const TaskMetrics metrics = task_metrics(labels, predictions);
  CHECK(metrics.fp_rate == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(metrics.confusion.fp == 2);
  CHECK(metrics.confusion.tn == 1);
  CHECK(metrics.confusion.tp == 1);

  CHECK_THROWS_AS(task_metrics(labels, {direct_pred("zzz", true)}), DataError);
}

TEST_CASE("decomposed task accuracy equals accuracy on pre-aggregated verdicts") {
  Rng rng(5150);
  std::vector<LabelRecord> labels;
  std::vector<PredictionRecord> decomposed;
  std::vector<PredictionRecord> pre_aggregated;
  for (int i = 0; i < 200; ++i) {
    const std::string id = "t" + std::to_string(i);
    const int steps = 1 + static_cast<int>(rng.bounded(4));
    std::vector<bool> action_labels, action_preds;
    for (int k = 0; k < steps; ++k) {
      action_labels.push_back(rng.uniform() < 0.8);
      action_preds.push_back(rng.uniform() < 0.8);
    }
    const bool task_label = std::all_of(action_labels.begin(),
                                        action_labels.end(),
                                        [](bool b) { return b; });
    labels.push_back(label(id, "adult", task_label, action_labels));
    decomposed.push_back(decomposed_pred(id, action_preds));
    pre_aggregated.push_back(direct_pred(id, decomposed_conclusion(action_preds)));
  }
  const TaskMetrics from_actions = task_metrics(labels, decomposed);
  const TaskMetrics from_verdicts = task_metrics(labels, pre_aggregated);
  CHECK(from_actions.accuracy == from_verdicts.accuracy);
  CHECK(from_actions.mcc == from_verdicts.mcc);
  CHECK(from_actions.fp_rate == from_verdicts.fp_rate);
}

TEST_CASE("decomposed_conclusion: conjunction semantics") {
  CHECK(decomposed_conclusion({true, true, true}));
  CHECK_FALSE(decomposed_conclusion({true, false, true}));
  CHECK_THROWS_AS(decomposed_conclusion({}), ArgumentError);

  Rng rng(8);
  for (int round = 0; round < 200; ++round) {
    std::vector<bool> preds;
    const std::size_t n = 1 + rng.bounded(6);
    bool expected = true;
    for (std::size_t i = 0; i < n; ++i) {
      preds.push_back(rng.coin());
      expected = expected && preds.back();
    }
    CHECK(decomposed_conclusion(preds) == expected);
  }
}

TEST_CASE("consistency: agreement percentage between granularities") {
  std::vector<PredictionRecord> direct = {direct_pred("a", true),
                                          direct_pred("b", false),
                                          direct_pred("c", true),
                                          direct_pred("d", false)};
  std::vector<PredictionRecord> decomposed = {
      decomposed_pred("a", {true, true}), decomposed_pred("b", {false}),
      decomposed_pred("c", {true}), decomposed_pred("d", {true, false})};
  CHECK(consistency(direct, decomposed) == 100.0);

  decomposed = {decomposed_pred("a", {false}), decomposed_pred("b", {true}),
                decomposed_pred("c", {true, false}),
                decomposed_pred("d", {true, true})};
  CHECK(consistency(direct, decomposed) == 0.0);

  decomposed = {decomposed_pred("a", {true}), decomposed_pred("b", {true}),
                decomposed_pred("c", {true}), decomposed_pred("d", {true})};
  CHECK(consistency(direct, decomposed) == 50.0);

  decomposed.pop_back();
  CHECK_THROWS_AS(consistency(direct, decomposed), DataError);
}

TEST_CASE("parse_completion: tags, answers and placeholder detection") {
  const ParsedCompletion ok =
      parse_completion("<think>x</think><answer>True</answer>");
  CHECK(ok.think == "x");
  REQUIRE(ok.answer.has_value());
  CHECK(*ok.answer == true);
  CHECK(ok.format_ok);
  CHECK_FALSE(ok.placeholder);

  CHECK_FALSE(parse_completion("<think>x</think>").format_ok);
  CHECK_FALSE(parse_completion("<answer>False</answer>").format_ok);
  CHECK_FALSE(parse_completion("<think>x</think><answer>maybe</answer>").format_ok);

  const ParsedCompletion lowercase =
      parse_completion("<think>y</think><answer> false </answer>");
  CHECK(lowercase.format_ok);
  CHECK(*lowercase.answer == false);

  const ParsedCompletion placeholder = parse_completion(
      "<think> reasoning process here </think><answer>True</answer>");
  CHECK(placeholder.placeholder);
  CHECK(placeholder.format_ok);
}

TEST_CASE("grpo_reward: worked examples") {
  // Correct-false completion naming the failing navigation property.
  const RewardBreakdown high = grpo_reward(
      "<think>The path to the cabinet is blocked for the wheelchair.</think>"
      "<answer>False</answer>",
      false, PropertyKind::navigable);
  CHECK(high.r_format == 0.5);
  CHECK(high.r_correct == 3.0);
  CHECK(high.r_spatial == 1.0);
  CHECK(high.total == 4.5);

  const RewardBreakdown correct_true = grpo_reward(
      "<think>Open floor, everything near.</think><answer>True</answer>", true,
      std::nullopt);
  CHECK(correct_true.total == 2.5);

  const RewardBreakdown lazy = grpo_reward(
      "<think> reasoning process here </think><answer>True</answer>", true,
      std::nullopt);
  CHECK(lazy.total == -1.0);
  CHECK(lazy.r_format == 0.0);
  CHECK(lazy.r_correct == 0.0);
  CHECK(lazy.r_spatial == 0.0);
}

TEST_CASE("grpo_reward: keyword matching details") {
  // Case-insensitive substring, including multi-word keywords.
  const RewardBreakdown multi = grpo_reward(
      "<think>The shelf is TOO FAR above the child.</think><answer>False</answer>",
      false, PropertyKind::reachable);
  CHECK(multi.r_spatial == 1.0);
  CHECK(std::find(multi.matched_keywords.begin(), multi.matched_keywords.end(),
                  "too far") != multi.matched_keywords.end());

  // Keywords only count for the failing property's row.
  const RewardBreakdown wrong_row = grpo_reward(
      "<think>cannot walk there</think><answer>False</answer>", false,
      PropertyKind::clearance);
  CHECK(wrong_row.r_spatial == 0.0);

  // No spatial reward when the task is actually feasible.
  const RewardBreakdown feasible = grpo_reward(
      "<think>blocked path everywhere</think><answer>False</answer>", true,
      PropertyKind::navigable);
  CHECK(feasible.r_spatial == 0.0);

  // Visibility has no keyword row.
  const RewardBreakdown vis = grpo_reward(
      "<think>blocked view</think><answer>False</answer>", false,
      PropertyKind::visible);
  CHECK(vis.r_spatial == 0.0);
  CHECK(spatial_keywords(PropertyKind::visible).empty());
}

TEST_CASE("grpo_reward totals form the expected finite set") {
  const std::set<double> allowed = {-1.0, 0.0, 0.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5};
  const char* think_variants[] = {
      "",                                    // missing think tag
      "<think>no keyword here at all</think>",
      "<think>the path is blocked</think>",  // navigable keyword
      "<think> reasoning process here </think>",
  };
  const char* answer_variants[] = {
      "", "<answer>True</answer>", "<answer>False</answer>",
      "<answer>perhaps</answer>"};
  std::set<double> seen;
  for (const char* think : think_variants) {
    for (const char* answer : answer_variants) {
      for (const bool label_value : {true, false}) {
        for (const auto property :
             {std::optional<PropertyKind>{}, std::optional{PropertyKind::navigable},
              std::optional{PropertyKind::reachable}}) {
          const std::string completion = std::string(think) + answer;
          const RewardBreakdown reward =
              grpo_reward(completion, label_value, property);
          CHECK(allowed.count(reward.total) == 1);
          seen.insert(reward.total);
          if (parse_completion(completion).placeholder) {
            CHECK(reward.total == -1.0);
          } else {
            CHECK(reward.total ==
                  reward.r_format + reward.r_correct + reward.r_spatial);
          }
        }
      }
    }
  }
  // The enumeration exercises every reachable total.
  CHECK(seen.count(4.5) == 1);
  CHECK(seen.count(-1.0) == 1);
  CHECK(seen.count(0.0) == 1);
  CHECK(seen.count(2.5) == 1);
  CHECK(seen.count(3.5) == 1);
}

TEST_CASE("group_advantage: zero variance, hand value and centering") {
  const std::vector<double> zeros = group_advantage({1.0, 1.0, 1.0}, 1e-4);
  for (const double a : zeros) CHECK(a == 0.0);

  const std::vector<double> pair = group_advantage({0.0, 2.0}, 1e-4);
  CHECK(pair[0] == doctest::Approx(-1.0 / 1.0001).epsilon(1e-12));
  CHECK(pair[1] == doctest::Approx(1.0 / 1.0001).epsilon(1e-12));

  Rng rng(99);
  for (int round = 0; round < 50; ++round) {
    std::vector<double> rewards;
    const std::size_t n = 1 + rng.bounded(12);
    for (std::size_t i = 0; i < n; ++i) rewards.push_back(rng.uniform(-5, 5));
    const std::vector<double> advantages = group_advantage(rewards, 1e-4);
    double mean = 0.0;
    for (const double a : advantages) mean += a;
    mean /= static_cast<double>(advantages.size());
    CHECK(std::abs(mean) < 1e-12);
  }

  CHECK_THROWS_AS(group_advantage({}, 1e-4), ArgumentError);
  CHECK_THROWS_AS(group_advantage({1.0}, 0.0), ArgumentError);
}

TEST_CASE("group_advantage: output spread approaches 1 when sigma >> epsilon") {
  Rng rng(313);
  for (int round = 0; round < 20; ++round) {
    std::vector<double> rewards;
    for (int i = 0; i < 24; ++i) rewards.push_back(rng.uniform(-10.0, 10.0));
    const std::vector<double> advantages = group_advantage(rewards, 1e-4);

    double mean = 0.0;
    for (const double a : advantages) mean += a;
    mean /= static_cast<double>(advantages.size());
    double variance = 0.0;
    for (const double a : advantages) variance += (a - mean) * (a - mean);
    variance /= static_cast<double>(advantages.size());
    const double spread = std::sqrt(variance);

    double reward_var = 0.0;
    double reward_mean = 0.0;
    for (const double r : rewards) reward_mean += r;
    reward_mean /= static_cast<double>(rewards.size());
    for (const double r : rewards)
      reward_var += (r - reward_mean) * (r - reward_mean);
    const double sigma = std::sqrt(reward_var / rewards.size());

    // spread = sigma / (sigma + eps): within eps-relative error of 1.
    CHECK(std::abs(spread - 1.0) <= 2.0 * 1e-4 / sigma + 1e-12);
  }
}
