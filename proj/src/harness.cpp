/**
 * @file harness.cpp
 * @brief Manifest loading, batch scoring and report emission.
 */
#include "notegrade/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "text_lines.hpp"

namespace notegrade {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string manifest_error(std::size_t line_no, const std::string& what) {
  return "manifest line " + std::to_string(line_no) + ": " + what;
}

std::string string_field(const json& obj, const char* field, std::size_t line_no, bool required) {
  const auto it = obj.find(field);
  if (it == obj.end()) {
    if (required) throw ConfigError(manifest_error(line_no, std::string("missing required field \"") + field + "\""));
    return {};
  }
  if (!it->is_string()) throw ConfigError(manifest_error(line_no, std::string("field \"") + field + "\" must be a string"));
  return it->get<std::string>();
}

Tuning tuning_from_json(const json& value, const std::string& context) {
  if (!value.is_array() || value.size() != kStringCount) {
    throw ConfigError(context + ": tuning must be an array of 6 MIDI values");
  }
  std::array<int, kStringCount> base{};
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!value[i].is_number_integer()) throw ConfigError(context + ": tuning values must be integers");
    base[i] = value[i].get<int>();
  }
  try {
    return Tuning(base);
  } catch (const DomainError& e) {
    throw ConfigError(context + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

ojson result_json(const TaskResult& r) {
  ojson j;
  j["id"] = r.sample_id;
  j["task"] = std::string(to_string(r.task));
  j["format"] = std::string(to_string(r.format));
  j["valid"] = r.valid;
  j["rejected"] = r.rejected;
  if (r.correct) j["correct"] = *r.correct;
  if (r.acc_pitch) j["acc_pitch"] = to_double(*r.acc_pitch);
  if (r.acc_dur) j["acc_dur"] = to_double(*r.acc_dur);
  if (r.fmt_legal) j["fmt_legal"] = *r.fmt_legal;
  if (r.hybrid) {
    j["hybrid"] = to_double(*r.hybrid);
    j["hybrid_exact"] = to_fraction_string(*r.hybrid);
  }
  if (r.technical) j["technical"] = to_double(*r.technical);
  if (r.smg) {
    ojson checks;
    checks["renderable"] = r.smg->renderable;
    checks["measure_arith_ok"] = r.smg->measure_arith_ok;
    checks["key_consistent"] = r.smg->key_consistent;
    checks["rests_legal"] = r.smg->rests_legal;
    checks["structure_ok"] = r.smg->structure_ok;
    j["smg_checks"] = std::move(checks);
  }
  if (r.aesthetic) j["aesthetic"] = *r.aesthetic;
  if (r.fingering) j["fingering"] = *r.fingering;
  j["diagnostics"] = r.diagnostics;
  return j;
}

ojson config_json(const HarnessConfig& c) {
  ojson j;
  j["weights"] = {{"pitch", to_fraction_string(c.scoring.weights.pitch())},
                  {"duration", to_fraction_string(c.scoring.weights.duration())},
                  {"format", to_fraction_string(c.scoring.weights.format())}};
  j["grid"] = to_fraction_string(c.scoring.grid);
  ojson lambda;
  for (Task t : kAllTasks) lambda[std::string(to_string(t))] = to_fraction_string(c.lambda[t]);
  j["lambda"] = std::move(lambda);
  j["tuning"] = c.scoring.tuning.base();
  j["lenient_cnc"] = c.scoring.lenient_cnc;
  if (c.scoring.ast_length_cap) j["ast_length_cap"] = *c.scoring.ast_length_cap;
  else j["ast_length_cap"] = nullptr;
  j["version"] = std::string(kToolVersion);
  return j;
}

GroundTruth load_ground_truth(const SampleRecord& record) {
  std::string text;
  try {
    text = read_file(record.gt_path);
  } catch (const std::exception& e) {
    throw IntegrityError("sample '" + record.id + "': ground truth unreadable: " + e.what());
  }
  try {
    return parse_ground_truth(text);
  } catch (const SchemaError& e) {
    throw IntegrityError("sample '" + record.id + "': " + e.what());
  }
}

TaskResult score_record(const SampleRecord& record, const HarnessConfig& config) {
  ScoringOptions options = config.scoring;
  if (record.tuning_override) options.tuning = *record.tuning_override;

  std::optional<GroundTruth> gt;
  if (record.task == Task::CNC || record.task == Task::AST) gt = load_ground_truth(record);

  std::string pred;
  bool pred_missing = false;
  try {
    pred = read_file(record.pred_path);
  } catch (const std::exception&) {
    pred_missing = true;
  }

  TaskResult result;
  try {
    switch (record.task) {
      case Task::VSU: result = score_vsu(pred, record.answer); break;
      case Task::CNC: result = score_cnc(pred, record.format, *gt, options); break;
      case Task::AST: result = score_ast(pred, record.format, *gt, options); break;
      case Task::SMG:
        result = score_smg(pred, record.format, *record.declared_meter, *record.declared_key, options);
        break;
    }
  } catch (const SchemaError& e) {
    throw IntegrityError("sample '" + record.id + "': " + e.what());
  }
  result.sample_id = record.id;
  result.task = record.task;
  result.format = record.format;
  if (pred_missing) result.diagnostics.insert(result.diagnostics.begin(), "prediction file missing; scored as empty");
  return result;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw std::runtime_error("no such file '" + path.string() + "'");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<SampleRecord> parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<SampleRecord> records;
  std::set<std::string> ids;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    json obj;
    try {
      obj = json::parse(lines[i]);
    } catch (const json::exception& e) {
      throw ConfigError(manifest_error(line_no, std::string("malformed JSON: ") + e.what()));
    }
    if (!obj.is_object()) throw ConfigError(manifest_error(line_no, "expected a JSON object"));

    SampleRecord r;
    r.id = string_field(obj, "id", line_no, true);
    const auto task_name = string_field(obj, "task", line_no, true);
    const auto format_name = string_field(obj, "format", line_no, true);
    try {
      r.task = parse_task(task_name);
      r.format = parse_format(format_name);
    } catch (const ConfigError& e) {
      throw ConfigError(manifest_error(line_no, e.what()));
    }
    r.pred_path = resolve(base_dir, string_field(obj, "pred_path", line_no, true));
    const bool needs_gt = r.task == Task::CNC || r.task == Task::AST;
    if (auto gt = string_field(obj, "gt_path", line_no, needs_gt); !gt.empty()) r.gt_path = resolve(base_dir, gt);
    r.answer = string_field(obj, "answer", line_no, r.task == Task::VSU);
    if (r.task == Task::SMG) {
      try {
        r.declared_key = KeySignature::parse(string_field(obj, "declared_key", line_no, true));
        r.declared_meter = TimeSignature::parse(string_field(obj, "declared_meter", line_no, true));
      } catch (const DomainError& e) {
        throw ConfigError(manifest_error(line_no, e.what()));
      }
    }
    if (const auto it = obj.find("tuning"); it != obj.end() && !it->is_null()) {
      r.tuning_override = tuning_from_json(*it, manifest_error(line_no, "tuning"));
    }
    if (!ids.insert(r.id).second) throw ConfigError(manifest_error(line_no, "duplicate id '" + r.id + "'"));
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<SampleRecord> load_manifest(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_manifest(text, path.parent_path());
}

HarnessConfig apply_config_json(std::string_view json_text, HarnessConfig base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  auto text_or_list = [](const json& v, const char* what) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) {
        if (!joined.empty()) joined += ',';
        if (x.is_string()) joined += x.get<std::string>();
        else if (x.is_number()) joined += x.dump();
        else throw ConfigError(std::string(what) + " entries must be numbers or strings");
      }
      return joined;
    }
    throw ConfigError(std::string(what) + " must be a string or an array");
  };

  if (auto it = j.find("weights"); it != j.end()) base.scoring.weights = MetricWeights::parse(text_or_list(*it, "weights"));
  if (auto it = j.find("lambda"); it != j.end()) base.lambda = CapabilityWeights::parse(text_or_list(*it, "lambda"));
  if (auto it = j.find("grid"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("grid must be a \"num/den\" string");
    try {
      base.scoring.grid = parse_rational(it->get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
    if (base.scoring.grid <= 0) throw ConfigError("grid must be positive");
  }
  if (auto it = j.find("workers"); it != j.end()) {
    if (!it->is_number_unsigned() || it->get<unsigned>() == 0) throw ConfigError("workers must be a positive integer");
    base.workers = it->get<unsigned>();
  }
  if (auto it = j.find("tuning"); it != j.end()) base.scoring.tuning = tuning_from_json(*it, "config");
  if (auto it = j.find("lenient_cnc"); it != j.end()) {
    if (!it->is_boolean()) throw ConfigError("lenient_cnc must be a boolean");
    base.scoring.lenient_cnc = it->get<bool>();
  }
  if (auto it = j.find("ast_length_cap"); it != j.end()) {
    if (it->is_null()) base.scoring.ast_length_cap.reset();
    else if (it->is_number_unsigned() && it->get<unsigned>() > 0) base.scoring.ast_length_cap = it->get<unsigned>();
    else throw ConfigError("ast_length_cap must be a positive integer or null");
  }
  return base;
}

Report summarize(std::vector<TaskResult> results, const HarnessConfig& config) {
  std::sort(results.begin(), results.end(),
            [](const TaskResult& a, const TaskResult& b) { return a.sample_id < b.sample_id; });
  Report report;
  report.config = config;
  for (Task t : kAllTasks) report.per_task[t] = {};
  for (const auto& r : results) {
    auto& s = report.per_task[r.task];
    ++s.count;
    if (r.rejected || !r.valid) ++s.invalid_count;
  }
  const auto pooled = aggregate_capability(results, config.lambda);
  for (auto& [task, summary] : report.per_task) {
    if (auto it = pooled.task_means.find(task); it != pooled.task_means.end()) summary.mean = it->second;
  }
  report.capability = pooled.value;
  report.diagnostics = pooled.diagnostics;

  std::map<NotationFormat, std::vector<TaskResult>> by_format;
  for (const auto& r : results) by_format[r.format].push_back(r);
  for (const auto& [format, subset] : by_format) {
    report.capability_by_format[format] = aggregate_capability(subset, config.lambda).value;
  }
  report.per_sample = std::move(results);
  return report;
}

Report run_batch(const std::vector<SampleRecord>& records, const HarnessConfig& config, std::stop_token stop) {
  std::vector<std::optional<TaskResult>> slots(records.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load() && !stop.stop_requested()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= records.size()) return;
      try {
        slots[i] = score_record(records[i], config);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };

  const unsigned count = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(records.size())));
  {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  if (stop.stop_requested()) throw Cancelled();

  std::vector<TaskResult> results;
  results.reserve(slots.size());
  for (auto& s : slots) results.push_back(std::move(*s));
  return summarize(std::move(results), config);
}

std::map<std::string, ExternalScore> parse_external_scores(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("external scores are not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("external scores must be a JSON object keyed by sample id");
  std::map<std::string, ExternalScore> out;
  for (const auto& [id, entry] : j.items()) {
    if (!entry.is_object()) throw ConfigError("external score for '" + id + "' must be an object");
    ExternalScore score;
    auto read = [&](const char* field) -> std::optional<double> {
      const auto it = entry.find(field);
      if (it == entry.end() || it->is_null()) return std::nullopt;
      if (!it->is_number()) throw ConfigError("external " + std::string(field) + " for '" + id + "' must be a number");
      const double v = it->get<double>();
      if (!(v >= 1.0 && v <= 5.0)) {
        throw ConfigError("external " + std::string(field) + " for '" + id + "' outside [1, 5]");
      }
      return v;
    };
    score.aesthetic = read("aesthetic");
    score.fingering = read("fingering");
    out.emplace(id, score);
  }
  return out;
}

std::map<std::string, ExternalScore> ingest_external_scores(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_external_scores(text);
}

void attach_external_scores(Report& report, const std::map<std::string, ExternalScore>& scores) {
  for (const auto& [id, score] : scores) {
    auto it = std::lower_bound(report.per_sample.begin(), report.per_sample.end(), id,
                               [](const TaskResult& r, const std::string& key) { return r.sample_id < key; });
    if (it == report.per_sample.end() || it->sample_id != id || it->task != Task::SMG) {
      report.diagnostics.push_back("external score for '" + id + "' has no matching SMG sample; ignored");
      continue;
    }
    it->aesthetic = score.aesthetic;
    it->fingering = score.fingering;
  }
}

std::string task_result_to_json(const TaskResult& result) { return result_json(result).dump(2); }

std::string report_to_json(const Report& report) {
  ojson j;
  j["tool"] = "notegrade";
  j["version"] = std::string(kToolVersion);
  j["config"] = config_json(report.config);
  j["capability"] = to_double(report.capability);
  j["capability_exact"] = to_fraction_string(report.capability);
  ojson by_format = ojson::object();
  for (const auto& [format, value] : report.capability_by_format) {
    by_format[std::string(to_string(format))] = {{"capability", to_double(value)},
                                                 {"capability_exact", to_fraction_string(value)}};
  }
  j["capability_by_format"] = std::move(by_format);
  ojson per_task;
  for (const auto& [task, s] : report.per_task) {
    per_task[std::string(to_string(task))] = {{"mean", to_double(s.mean)},
                                              {"mean_exact", to_fraction_string(s.mean)},
                                              {"count", s.count},
                                              {"invalid_count", s.invalid_count}};
  }
  j["per_task"] = std::move(per_task);
  ojson samples = ojson::array();
  for (const auto& r : report.per_sample) samples.push_back(result_json(r));
  j["per_sample"] = std::move(samples);
  j["diagnostics"] = report.diagnostics;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const Report& report) {
  struct Cell {
    std::size_t count = 0, invalid = 0;
    Rational score = 0, pitch = 0, dur = 0;
    std::size_t seq = 0;
    double aesthetic = 0, fingering = 0;
    std::size_t n_aesthetic = 0, n_fingering = 0;
  };
  // Table layout: format blocks, tasks in SMG, CNC, VSU, AST order.
  constexpr std::array<Task, 4> kColumnOrder = {Task::SMG, Task::CNC, Task::VSU, Task::AST};
  std::map<std::pair<NotationFormat, Task>, Cell> cells;
  for (const auto& r : report.per_sample) {
    auto& c = cells[{r.format, r.task}];
    ++c.count;
    if (r.rejected || !r.valid) ++c.invalid;
    c.score += r.task == Task::SMG ? r.technical.value_or(Rational(0)) : r.normalized_score();
    if (r.acc_pitch && r.acc_dur) {
      c.pitch += *r.acc_pitch;
      c.dur += *r.acc_dur;
      ++c.seq;
    }
    if (r.aesthetic) c.aesthetic += *r.aesthetic, ++c.n_aesthetic;
    if (r.fingering) c.fingering += *r.fingering, ++c.n_fingering;
  }

  auto num = [](double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    return os.str();
  };
  std::ostringstream out;
  out << "format,task,count,invalid_count,score,acc_pitch,acc_dur,aesthetic,fingering\n";
  for (NotationFormat f : {NotationFormat::Staff, NotationFormat::Jianpu, NotationFormat::Tab}) {
    for (Task t : kColumnOrder) {
      const auto it = cells.find({f, t});
      if (it == cells.end()) continue;
      const auto& c = it->second;
      out << to_string(f) << ',' << to_string(t) << ',' << c.count << ',' << c.invalid << ','
          << num(to_double(c.score / c.count)) << ',';
      if (c.seq) out << num(to_double(c.pitch / c.seq)) << ',' << num(to_double(c.dur / c.seq));
      else out << ',';
      out << ',';
      if (c.n_aesthetic) out << num(c.aesthetic / static_cast<double>(c.n_aesthetic));
      out << ',';
      if (c.n_fingering) out << num(c.fingering / static_cast<double>(c.n_fingering));
      out << '\n';
    }
  }
  return out.str();
}

void emit_report(const Report& report, const std::filesystem::path& json_path,
                 const std::optional<std::filesystem::path>& csv_path) {
  const auto json_text = report_to_json(report);
  std::string csv_text;
  if (csv_path) csv_text = report_to_csv(report);
  write_atomically(json_path, json_text);
  if (csv_path) write_atomically(*csv_path, csv_text);
}

}  // namespace notegrade
