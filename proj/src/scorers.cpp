/**
 * @file scorers.cpp
 * @brief VSU, CNC, AST and SMG evaluators.
 */
#include "notegrade/scorers.hpp"

#include <algorithm>
#include <cctype>

#include "text_lines.hpp"

namespace notegrade {
namespace {

constexpr char kFirstOption = 'a';
constexpr char kLastOption = 'h';

bool is_option_letter(char c) { return c >= kFirstOption && c <= kLastOption; }

std::string casefold(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Case-folded, punctuation removed, whitespace collapsed.
std::string normalize_answer(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char raw : s) {
    const auto u = static_cast<unsigned char>(raw);
    if (std::isspace(u)) {
      pending_space = !out.empty();
    } else if (std::ispunct(u)) {
      continue;
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(u));
    }
  }
  return out;
}

/// Option label at the start of a normalized ground-truth answer ("b" or "b g major").
std::optional<char> gt_option_letter(const std::string& normalized) {
  if (normalized.empty() || !is_option_letter(normalized[0])) return std::nullopt;
  if (normalized.size() == 1 || normalized[1] == ' ') return normalized[0];
  return std::nullopt;
}

bool word_boundary(const std::string& s, std::size_t i) {
  return i >= s.size() || !std::isalnum(static_cast<unsigned char>(s[i]));
}

/// Option letter named by a free-form prediction: "(b)", "answer is b", "option b", or a leading "b." / "b)".
std::optional<char> extract_option_letter(std::string_view pred) {
  const std::string s = casefold(trim(pred));
  for (std::size_t i = 0; i + 2 < s.size(); ++i) {
    if (s[i] == '(' && is_option_letter(s[i + 1]) && s[i + 2] == ')') return s[i + 1];
  }
  for (std::string_view cue : {"answer is ", "answer: ", "answer:", "option ", "choice "}) {
    for (auto at = s.find(cue); at != std::string::npos; at = s.find(cue, at + 1)) {
      std::size_t i = at + cue.size();
      while (i < s.size() && (s[i] == ' ' || s[i] == '*' || s[i] == '"' || s[i] == '\'')) ++i;
      if (i < s.size() && is_option_letter(s[i]) && word_boundary(s, i + 1)) return s[i];
    }
  }
  if (!s.empty() && is_option_letter(s[0])) {
    if (s.size() == 1 || s[1] == '.' || s[1] == ')' || s[1] == ':' || s[1] == ',') return s[0];
  }
  return std::nullopt;
}

struct SequencePair {
  AccuracyScore pitch;
  AccuracyScore duration;
};

SequencePair align_sequences(const CanonicalSequence& gt, const CanonicalSequence& pred, const Rational& grid) {
  const auto gt_tokens = tokenize(gt);
  const auto pred_tokens = tokenize(pred);
  const auto gt_dur = quantize_durations(gt, grid);
  const auto pred_dur = quantize_durations(pred, grid);
  return {alignment_accuracy(gt_tokens, pred_tokens), alignment_accuracy(gt_dur, pred_dur)};
}

void zero_sequence_scores(TaskResult& r) {
  r.rejected = true;
  r.acc_pitch = Rational(0);
  r.acc_dur = Rational(0);
  r.fmt_legal = false;
  r.hybrid = Rational(0);
}

void record_violations(TaskResult& r, const FormatVerdict& verdict) {
  for (const auto& v : verdict.violations) {
    std::string line = "format " + v.rule_id;
    if (v.where.line > 0) line += " at " + std::to_string(v.where.line) + ":" + std::to_string(v.where.column);
    r.diagnostics.push_back(line + ": " + v.message);
  }
}

MetricWeights weights_for(NotationFormat format, const ScoringOptions& options) {
  return format == NotationFormat::Tab ? options.weights.without_duration() : options.weights;
}

CanonicalSequence project_ground_truth(const GroundTruth& gt) {
  try {
    return project(gt);
  } catch (const Error& e) {
    throw SchemaError("ground truth '" + gt.id + "' cannot be projected: " + e.what());
  }
}

std::optional<ScoreDoc> try_parse(std::string_view text, NotationFormat format, const Tuning& tuning,
                                  TaskResult& r) {
  try {
    return parse_notation(text, format, tuning);
  } catch (const ParseError& e) {
    r.diagnostics.push_back(std::string("unparseable: ") + e.what());
  } catch (const Error& e) {
    r.diagnostics.push_back(std::string("unparseable: ") + e.what());
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Task task) {
  switch (task) {
    case Task::VSU: return "VSU";
    case Task::CNC: return "CNC";
    case Task::AST: return "AST";
    case Task::SMG: return "SMG";
  }
  return "VSU";
}

Task parse_task(std::string_view name) {
  const auto lower = casefold(name);
  if (lower == "vsu") return Task::VSU;
  if (lower == "cnc") return Task::CNC;
  if (lower == "ast") return Task::AST;
  if (lower == "smg") return Task::SMG;
  throw ConfigError("unknown task '" + std::string(name) + "' (expected vsu, cnc, ast or smg)");
}

Rational TaskResult::normalized_score() const {
  switch (task) {
    case Task::VSU: return correct.value_or(false) ? Rational(1) : Rational(0);
    case Task::CNC:
    case Task::AST: return hybrid.value_or(Rational(0));
    case Task::SMG: return technical.value_or(Rational(0)) / 5;
  }
  return 0;
}

TaskResult score_vsu(std::string_view pred_text, std::string_view gt_answer) {
  TaskResult r;
  r.task = Task::VSU;
  const auto gt_norm = normalize_answer(gt_answer);
  const auto gt_letter = gt_option_letter(gt_norm);
  const auto pred_norm = normalize_answer(pred_text);

  if (pred_norm.empty()) {
    r.correct = false;
    r.diagnostics.push_back("empty prediction");
    return r;
  }
  if (pred_norm == gt_norm || (gt_letter && pred_norm.size() == 1 && pred_norm[0] == *gt_letter)) {
    r.correct = true;
    return r;
  }
  const auto letter = extract_option_letter(pred_text);
  if (letter) r.diagnostics.push_back(std::string("extracted option '") + *letter + "'");
  else r.diagnostics.push_back("no option letter found");
  r.correct = letter && gt_letter && *letter == *gt_letter;
  return r;
}

TaskResult score_cnc(std::string_view pred_text, NotationFormat target_format, const GroundTruth& gt,
                     const ScoringOptions& options) {
  const auto gt_seq = project_ground_truth(gt);
  TaskResult r;
  r.task = Task::CNC;
  r.format = target_format;

  const auto verdict = validate_format(pred_text, target_format, options.tuning);
  record_violations(r, verdict);
  std::optional<ScoreDoc> doc;
  if (verdict.legal || options.lenient_cnc) doc = try_parse(pred_text, target_format, options.tuning, r);
  if (!doc) {
    zero_sequence_scores(r);
    r.diagnostics.push_back("rejected: target format is illegal or unparseable");
    return r;
  }
  if (!verdict.legal) r.diagnostics.push_back("lenient: format-illegal output scored for diagnostics");

  if (doc->has_key && doc->key != gt.key) {
    r.diagnostics.push_back("key mismatch: expected " + gt.key.name() + ", got " + doc->key.name());
  }
  if (doc->has_meter && doc->meter != gt.meter) {
    r.diagnostics.push_back("meter mismatch: expected " + gt.meter.to_string() + ", got " + doc->meter.to_string());
  }

  const auto aligned = align_sequences(gt_seq, project(*doc), options.grid);
  r.acc_pitch = aligned.pitch.value;
  r.acc_dur = aligned.duration.value;
  r.fmt_legal = verdict.legal;
  r.hybrid = hybrid_score(*r.acc_pitch, *r.acc_dur, *r.fmt_legal, weights_for(target_format, options));
  r.diagnostics.push_back("pitch ed=" + std::to_string(aligned.pitch.ed) + " gt=" +
                          std::to_string(aligned.pitch.len_gt) + " pred=" + std::to_string(aligned.pitch.len_pred));
  return r;
}

TaskResult score_ast(std::string_view pred_text, NotationFormat format, const GroundTruth& gt,
                     const ScoringOptions& options) {
  const auto gt_seq = project_ground_truth(gt);
  TaskResult r;
  r.task = Task::AST;
  r.format = format;

  const auto verdict = validate_format(pred_text, format, options.tuning);
  const auto doc = try_parse(pred_text, format, options.tuning, r);
  if (!doc) {
    zero_sequence_scores(r);
    r.diagnostics.push_back("invalid: prediction is unparseable");
    return r;
  }
  record_violations(r, verdict);

  const auto pred_seq = project(*doc);
  if (options.ast_length_cap &&
      pred_seq.tokens.size() > static_cast<std::size_t>(*options.ast_length_cap) * gt_seq.tokens.size()) {
    zero_sequence_scores(r);
    r.diagnostics.push_back("invalid: prediction length " + std::to_string(pred_seq.tokens.size()) +
                            " exceeds length cap");
    return r;
  }

  const auto aligned = align_sequences(gt_seq, pred_seq, options.grid);
  r.acc_pitch = aligned.pitch.value;
  r.acc_dur = aligned.duration.value;
  r.fmt_legal = verdict.legal;
  r.hybrid = hybrid_score(*r.acc_pitch, *r.acc_dur, *r.fmt_legal, weights_for(format, options));
  r.diagnostics.push_back("pitch ed=" + std::to_string(aligned.pitch.ed) + " gt=" +
                          std::to_string(aligned.pitch.len_gt) + " pred=" + std::to_string(aligned.pitch.len_pred));
  return r;
}

TaskResult score_smg(std::string_view pred_text, NotationFormat format, const TimeSignature& declared_meter,
                     const KeySignature& declared_key, const ScoringOptions& options) {
  TaskResult r;
  r.task = Task::SMG;
  r.format = format;

  SmgRuleReport report;
  const auto verdict = validate_format(pred_text, format, options.tuning);
  record_violations(r, verdict);
  report.renderable = verdict.legal;

  if (const auto doc = try_parse(pred_text, format, options.tuning, r)) {
    const Rational bar = declared_meter.measure_beats();

    bool any_complete = false;
    report.measure_arith_ok = true;
    for (std::size_t i = 0; i < doc->measures.size(); ++i) {
      const auto& m = doc->measures[i];
      if (!m.bar_terminated) continue;
      any_complete = true;
      const Rational total = m.total_beats();
      if (total != bar) {
        report.measure_arith_ok = false;
        r.diagnostics.push_back("measure " + std::to_string(i + 1) + " sums to " + to_fraction_string(total) +
                                " beats, meter needs " + to_fraction_string(bar));
      }
    }
    if (!any_complete) {
      report.measure_arith_ok = false;
      r.diagnostics.push_back("no complete measures");
    }

    if (!doc->has_key) {
      report.key_consistent = true;
      r.diagnostics.push_back("key not encoded in this format; key check skipped");
    } else {
      report.key_consistent = doc->key == declared_key;
      if (!report.key_consistent) {
        r.diagnostics.push_back("key mismatch: declared " + declared_key.name() + ", got " + doc->key.name());
      }
    }
    if (doc->has_meter && doc->meter != declared_meter) {
      r.diagnostics.push_back("meter header " + doc->meter.to_string() + " differs from declared " +
                              declared_meter.to_string());
    }

    report.rests_legal = doc->rest_issues.empty();

    bool spans = false;
    for (const auto& m : doc->measures) {
      for (const auto& e : m.events) spans = spans || e.onset_beats + e.duration_beats > bar;
    }
    const bool enough = doc->measures.size() >= 2;
    const bool closed = doc->measures.back().bar_terminated;
    report.structure_ok = enough && closed && !spans;
    if (!enough) r.diagnostics.push_back("structure: fewer than 2 measures");
    if (!closed) r.diagnostics.push_back("structure: final measure not bar-terminated");
    if (spans) r.diagnostics.push_back("structure: event spans a barline");
  }

  report.technical = Rational(static_cast<int>(report.renderable) + static_cast<int>(report.measure_arith_ok) +
                              static_cast<int>(report.key_consistent) + static_cast<int>(report.rests_legal) +
                              static_cast<int>(report.structure_ok));
  r.rejected = !report.renderable;
  r.fmt_legal = report.renderable;
  r.technical = report.technical;
  r.smg = report;
  return r;
}

CapabilityWeights::CapabilityWeights()
    : CapabilityWeights({Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}) {}

CapabilityWeights::CapabilityWeights(std::array<Rational, 4> lambda) : lambda_(std::move(lambda)) {
  Rational sum = 0;
  for (const auto& l : lambda_) {
    if (l < 0) throw ConfigError("capability weights must be non-negative");
    sum += l;
  }
  if (sum != 1) throw ConfigError("capability weights must sum to 1 (got " + to_fraction_string(sum) + ")");
}

CapabilityWeights CapabilityWeights::parse(std::string_view text) {
  std::array<Rational, 4> lambda;
  std::size_t start = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const auto comma = text.find(',', start);
    if ((i + 1 < lambda.size()) == (comma == std::string_view::npos)) {
      throw ConfigError("lambda needs exactly four values v,c,a,s");
    }
    try {
      lambda[i] = parse_rational(trim(text.substr(start, comma - start)));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("bad lambda list '") + std::string(text) + "': " + e.what());
    }
    start = comma + 1;
  }
  return CapabilityWeights(lambda);
}

CapabilityScore aggregate_capability(std::span<const TaskResult> results, const CapabilityWeights& lambda) {
  std::map<Task, std::pair<Rational, std::size_t>> sums;
  for (const auto& r : results) {
    auto& [sum, count] = sums[r.task];
    sum += r.normalized_score();
    ++count;
  }
  CapabilityScore out;
  for (Task task : kAllTasks) {
    const auto it = sums.find(task);
    if (it == sums.end()) {
      out.diagnostics.push_back(std::string("no samples for task ") + std::string(to_string(task)) +
                                "; contributes 0");
      continue;
    }
    const Rational mean = it->second.first / it->second.second;
    out.task_means[task] = mean;
    out.value += lambda[task] * mean;
  }
  return out;
}

}  // namespace notegrade
