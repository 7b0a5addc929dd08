/**
 * @file notegrade_main.cpp
 * @brief Command-line front end: score, batch, validate, project.
 *
 * Exit codes: 0 success, 1 usage or configuration error, 2 benchmark
 * integrity error (unreadable or invalid ground truth).
 */
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "notegrade/harness.hpp"

namespace {

using namespace notegrade;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIntegrity = 2;

volatile std::sig_atomic_t g_interrupted = 0;

void on_signal(int) { g_interrupted = 1; }

struct CommonFlags {
  std::string weights;
  std::string grid;
};

HarnessConfig base_config() {
  HarnessConfig config;
  if (const char* path = std::getenv("NOTEGRADE_CONFIG"); path && *path) {
    std::string text;
    try {
      text = read_file(path);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("NOTEGRADE_CONFIG: ") + e.what());
    }
    config = apply_config_json(text, config);
  }
  return config;
}

void apply_common(HarnessConfig& config, const CommonFlags& flags) {
  if (!flags.weights.empty()) config.scoring.weights = MetricWeights::parse(flags.weights);
  if (!flags.grid.empty()) {
    try {
      config.scoring.grid = parse_rational(flags.grid);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--grid: ") + e.what());
    }
    if (config.scoring.grid <= 0) throw ConfigError("--grid must be positive");
  }
}

std::string read_input(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string read_ground_truth_file(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::exception& e) {
    throw IntegrityError(std::string("ground truth unreadable: ") + e.what());
  }
}

GroundTruth load_gt(const std::string& path) {
  try {
    return parse_ground_truth(read_ground_truth_file(path));
  } catch (const SchemaError& e) {
    throw IntegrityError(e.what());
  }
}

int run_score(const std::string& task_name, const std::string& format_name, const std::string& gt_path,
              const std::string& pred_path, const CommonFlags& flags, const std::string& key_name,
              const std::string& meter_name, bool lenient) {
  auto config = base_config();
  apply_common(config, flags);
  if (lenient) config.scoring.lenient_cnc = true;
  const Task task = parse_task(task_name);
  const NotationFormat format = parse_format(format_name);

  std::string pred;
  try {
    pred = read_file(pred_path);
  } catch (const std::exception&) {
    std::cerr << "notegrade: prediction '" << pred_path << "' missing; scoring as empty output\n";
  }

  TaskResult result;
  switch (task) {
    case Task::VSU: result = score_vsu(pred, read_ground_truth_file(gt_path)); break;
    case Task::CNC: result = score_cnc(pred, format, load_gt(gt_path), config.scoring); break;
    case Task::AST: result = score_ast(pred, format, load_gt(gt_path), config.scoring); break;
    case Task::SMG: {
      std::string key = key_name, meter = meter_name;
      if (!gt_path.empty() && (key.empty() || meter.empty())) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(read_ground_truth_file(gt_path));
          if (key.empty()) key = j.at("key").get<std::string>();
          if (meter.empty()) meter = j.at("meter").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
          throw IntegrityError(std::string("SMG constraints file: ") + e.what());
        }
      }
      if (key.empty() || meter.empty()) throw ConfigError("smg needs --key and --meter or a --gt constraints file");
      KeySignature declared_key;
      TimeSignature declared_meter;
      try {
        declared_key = KeySignature::parse(key);
        declared_meter = TimeSignature::parse(meter);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
      result = score_smg(pred, format, declared_meter, declared_key, config.scoring);
      break;
    }
  }
  result.task = task;
  result.format = format;
  result.sample_id = pred_path;
  std::cout << task_result_to_json(result) << "\n";
  return kExitOk;
}

int run_batch_command(const std::string& manifest, unsigned workers, const std::string& out,
                      const std::string& csv, const std::string& lambda, const std::string& external,
                      const CommonFlags& flags) {
  auto config = base_config();
  apply_common(config, flags);
  if (workers > 0) config.workers = workers;
  if (!lambda.empty()) config.lambda = CapabilityWeights::parse(lambda);

  const auto records = load_manifest(manifest);
  std::optional<std::map<std::string, ExternalScore>> external_scores;
  if (!external.empty()) external_scores = ingest_external_scores(external);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::stop_source stop;
  std::atomic<bool> done{false};
  std::jthread watcher([&] {
    while (!done.load()) {
      if (g_interrupted) {
        stop.request_stop();
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  });

  Report report;
  try {
    report = run_batch(records, config, stop.get_token());
  } catch (...) {
    done.store(true);
    throw;
  }
  done.store(true);

  if (external_scores) attach_external_scores(report, *external_scores);
  for (const auto& d : report.diagnostics) std::cerr << "notegrade: " << d << "\n";
  emit_report(report, out, csv.empty() ? std::nullopt : std::optional<std::filesystem::path>(csv));
  return kExitOk;
}

int run_validate(const std::string& format_name, const std::string& input) {
  const auto format = parse_format(format_name);
  const auto verdict = validate_format(read_input(input), format, base_config().scoring.tuning);
  nlohmann::ordered_json j;
  j["legal"] = verdict.legal;
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : verdict.violations) {
    j["violations"].push_back(
        {{"rule_id", v.rule_id}, {"line", v.where.line}, {"column", v.where.column}, {"message", v.message}});
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_project(const std::string& format_name, const std::string& input, const std::string& key) {
  const auto text = read_input(input);
  CanonicalSequence seq;
  if (format_name == "gt") {
    try {
      seq = project(parse_ground_truth(text));
    } catch (const SchemaError& e) {
      throw IntegrityError(e.what());
    }
  } else {
    const auto format = parse_format(format_name);
    std::string source = text;
    if (format == NotationFormat::Jianpu && !key.empty() && text.find("1=") == std::string::npos) {
      source = "1=" + key + "\n" + text;
    }
    try {
      seq = project(parse_notation(source, format, base_config().scoring.tuning));
    } catch (const ParseError& e) {
      std::cerr << "notegrade: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  std::cout << to_json(seq) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic scoring for symbolic music notation output", "notegrade"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonFlags flags;
  std::string task, format, gt, pred, key, meter;
  bool lenient = false;
  auto* score = app.add_subcommand("score", "Score one prediction against its reference");
  score->add_option("--task", task, "vsu, cnc, ast or smg")->required();
  score->add_option("--format", format, "staff, jianpu or tab")->required();
  score->add_option("--gt", gt, "Ground-truth JSON (answer text for vsu, constraints for smg)");
  score->add_option("--pred", pred, "Prediction text file")->required();
  score->add_option("--weights", flags.weights, "Hybrid weights p,d,f (sum 1)");
  score->add_option("--grid", flags.grid, "Duration quantization grid num/den");
  score->add_option("--key", key, "Declared key (smg)");
  score->add_option("--meter", meter, "Declared meter (smg)");
  score->add_flag("--lenient", lenient, "Score format-illegal CNC output (diagnostics only)");

  std::string manifest, out, csv, lambda, external;
  unsigned workers = 0;
  auto* batch = app.add_subcommand("batch", "Score a JSONL manifest");
  batch->add_option("--manifest", manifest, "JSONL manifest")->required();
  batch->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  batch->add_option("--out", out, "Report JSON path")->required();
  batch->add_option("--csv", csv, "Per format/task summary CSV path");
  batch->add_option("--lambda", lambda, "Task weights v,c,a,s (sum 1)");
  batch->add_option("--external-scores", external, "Externally judged aesthetic/fingering scores (JSON)");
  batch->add_option("--weights", flags.weights, "Hybrid weights p,d,f (sum 1)");
  batch->add_option("--grid", flags.grid, "Duration quantization grid num/den");

  std::string input;
  auto* validate = app.add_subcommand("validate", "Check strict format legality");
  validate->add_option("--format", format, "staff, jianpu or tab")->required();
  validate->add_option("--input", input, "Notation text file")->required();

  auto* proj = app.add_subcommand("project", "Print the canonical pitch sequence");
  proj->add_option("--format", format, "staff, jianpu, tab or gt")->required();
  proj->add_option("--input", input, "Notation text or ground-truth JSON")->required();
  proj->add_option("--key", key, "Key for Jianpu text without a 1= directive");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score) return run_score(task, format, gt, pred, flags, key, meter, lenient);
    if (*batch) return run_batch_command(manifest, workers, out, csv, lambda, external, flags);
    if (*validate) return run_validate(format, input);
    if (*proj) return run_project(format, input, key);
  } catch (const IntegrityError& e) {
    std::cerr << "notegrade: integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const Cancelled& e) {
    std::cerr << "notegrade: " << e.what() << "; no report written\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "notegrade: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
