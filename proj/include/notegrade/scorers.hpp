/**
 * @file scorers.hpp
 * @brief Per-task evaluators and the weighted capability aggregate.
 *
 * Every scorer is a pure function of its inputs. Model-side failures
 * (unparseable or malformed predictions) always produce a scored result;
 * only corrupt ground truth raises.
 */
#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "notegrade/alignment.hpp"
#include "notegrade/parsers.hpp"
#include "notegrade/projection.hpp"

namespace notegrade {

enum class Task { VSU, CNC, AST, SMG };

inline constexpr std::array<Task, 4> kAllTasks = {Task::VSU, Task::CNC, Task::AST, Task::SMG};

/// "VSU", "CNC", "AST", "SMG".
std::string_view to_string(Task task);
/// Case-insensitive. Throws ConfigError.
Task parse_task(std::string_view name);

struct SmgRuleReport {
  bool renderable = false;
  bool measure_arith_ok = false;
  bool key_consistent = false;
  bool rests_legal = false;
  bool structure_ok = false;
  Rational technical = 0;  // number of passed checks, 0..5
};

struct TaskResult {
  std::string sample_id;
  Task task = Task::VSU;
  NotationFormat format = NotationFormat::Staff;
  bool valid = true;
  // Prediction was unparseable, format-rejected or length-capped.
  bool rejected = false;
  std::optional<Rational> acc_pitch;
  std::optional<Rational> acc_dur;
  std::optional<bool> fmt_legal;
  std::optional<bool> correct;
  std::optional<Rational> technical;
  std::optional<Rational> hybrid;
  std::optional<SmgRuleReport> smg;
  // Externally produced judge scores, annotation only.
  std::optional<double> aesthetic;
  std::optional<double> fingering;
  std::vector<std::string> diagnostics;

  /// Score in [0, 1]: VSU correctness, CNC/AST hybrid, SMG technical / 5.
  Rational normalized_score() const;
};

struct ScoringOptions {
  MetricWeights weights;
  Rational grid = kDefaultGrid;
  Tuning tuning;
  // Score pitch/duration of format-illegal CNC output anyway (diagnostics only).
  bool lenient_cnc = false;
  // AST: predictions longer than ratio * |gt| tokens are rejected. Off when unset.
  std::optional<unsigned> ast_length_cap;
};

TaskResult score_vsu(std::string_view pred_text, std::string_view gt_answer);

TaskResult score_cnc(std::string_view pred_text, NotationFormat target_format, const GroundTruth& gt,
                     const ScoringOptions& options = {});

TaskResult score_ast(std::string_view pred_text, NotationFormat format, const GroundTruth& gt,
                     const ScoringOptions& options = {});

TaskResult score_smg(std::string_view pred_text, NotationFormat format, const TimeSignature& declared_meter,
                     const KeySignature& declared_key, const ScoringOptions& options = {});

/// Task trade-off weights, non-negative and summing to 1.
class CapabilityWeights {
 public:
  /// Uniform 1/4.
  CapabilityWeights();
  /// Order: VSU, CNC, AST, SMG. Throws ConfigError.
  explicit CapabilityWeights(std::array<Rational, 4> lambda);
  /// "v,c,a,s". Throws ConfigError.
  static CapabilityWeights parse(std::string_view text);

  const Rational& operator[](Task task) const { return lambda_[static_cast<std::size_t>(task)]; }

 private:
  std::array<Rational, 4> lambda_;
};

struct CapabilityScore {
  Rational value = 0;
  std::map<Task, Rational> task_means;  // only tasks with samples
  std::vector<std::string> diagnostics;
};

CapabilityScore aggregate_capability(std::span<const TaskResult> results, const CapabilityWeights& lambda = {});

}  // namespace notegrade
