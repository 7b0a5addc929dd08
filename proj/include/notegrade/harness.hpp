/**
 * @file harness.hpp
 * @brief Batch evaluation: manifests, concurrent scoring, reports.
 */
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "notegrade/scorers.hpp"

namespace notegrade {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct SampleRecord {
  std::string id;
  Task task = Task::VSU;
  NotationFormat format = NotationFormat::Staff;
  std::filesystem::path gt_path;    // CNC, AST
  std::filesystem::path pred_path;
  std::string answer;               // VSU
  std::optional<KeySignature> declared_key;     // SMG
  std::optional<TimeSignature> declared_meter;  // SMG
  std::optional<Tuning> tuning_override;
};

/// One JSON object per line; blank lines are skipped. Relative paths resolve
/// against `base_dir`. Throws ConfigError naming the line and field.
std::vector<SampleRecord> parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});
std::vector<SampleRecord> load_manifest(const std::filesystem::path& path);

struct HarnessConfig {
  ScoringOptions scoring;
  CapabilityWeights lambda;
  unsigned workers = 1;
};

/// Applies the fields present in a JSON config document ("weights", "grid",
/// "lambda", "workers", "tuning", "lenient_cnc", "ast_length_cap") on top of `base`.
HarnessConfig apply_config_json(std::string_view json_text, HarnessConfig base = {});

struct TaskSummary {
  Rational mean = 0;
  std::size_t count = 0;
  std::size_t invalid_count = 0;
};

struct Report {
  std::vector<TaskResult> per_sample;  // sorted by sample_id
  std::map<Task, TaskSummary> per_task;
  Rational capability = 0;
  std::map<NotationFormat, Rational> capability_by_format;
  std::vector<std::string> diagnostics;
  HarnessConfig config;
};

/// Builds the summary sections of a report from per-sample results.
Report summarize(std::vector<TaskResult> results, const HarnessConfig& config);

/// Scores every record with `config.workers` threads. Missing predictions are
/// scored as empty output; unreadable or invalid ground truth throws
/// IntegrityError. A stop request aborts with Cancelled and no report.
Report run_batch(const std::vector<SampleRecord>& records, const HarnessConfig& config,
                 std::stop_token stop = {});

class Cancelled : public Error {
 public:
  Cancelled() : Error("batch cancelled") {}
};

struct ExternalScore {
  std::optional<double> aesthetic;
  std::optional<double> fingering;
};

/// {"id": {"aesthetic": x, "fingering": y}, ...} with values in [1, 5]. Throws ConfigError.
std::map<std::string, ExternalScore> parse_external_scores(std::string_view json_text);
std::map<std::string, ExternalScore> ingest_external_scores(const std::filesystem::path& path);

/// Attaches scores to SMG results; unmatched ids become report diagnostics.
void attach_external_scores(Report& report, const std::map<std::string, ExternalScore>& scores);

std::string task_result_to_json(const TaskResult& result);
std::string report_to_json(const Report& report);
/// One row per (format, task) pair present.
std::string report_to_csv(const Report& report);

/// Writes JSON (and CSV when given) through temporary files renamed into place.
/// Throws std::runtime_error when a path is unwritable.
void emit_report(const Report& report, const std::filesystem::path& json_path,
                 const std::optional<std::filesystem::path>& csv_path = std::nullopt);

std::string read_file(const std::filesystem::path& path);

}  // namespace notegrade
