/**
 * @file validate.cpp
 * @brief Strict output-format legality checks.
 */
#include <algorithm>
#include <cctype>

#include "notegrade/parsers.hpp"
#include "text_lines.hpp"

namespace notegrade {
namespace {

void add(FormatVerdict& v, std::string rule_id, SourceLocation where, std::string message) {
  v.violations.push_back({std::move(rule_id), where, std::move(message)});
}

bool has_rule(const FormatVerdict& v, std::string_view rule_id) {
  return std::any_of(v.violations.begin(), v.violations.end(),
                     [&](const auto& x) { return x.rule_id == rule_id; });
}

/// Last body line (non-field, non-comment, non-blank) and its number.
std::pair<std::string_view, std::size_t> last_abc_body_line(const std::vector<std::string_view>& lines) {
  for (std::size_t i = lines.size(); i-- > 0;) {
    auto line = lines[i];
    if (auto pct = line.find('%'); pct != std::string_view::npos) line = line.substr(0, pct);
    line = trim(line);
    if (line.empty()) continue;
    if (line.size() >= 2 && std::isalpha(static_cast<unsigned char>(line[0])) && line[1] == ':') continue;
    return {line, i + 1};
  }
  return {{}, 0};
}

void check_abc_structure(std::string_view text, FormatVerdict& v) {
  const auto lines = split_lines(text);
  bool seen[4] = {false, false, false, false};
  constexpr std::string_view fields = "XKML";
  for (auto raw : lines) {
    const auto line = trim(raw);
    if (line.size() >= 2 && line[1] == ':') {
      if (auto f = fields.find(line[0]); f != std::string_view::npos) seen[f] = true;
    }
  }
  const std::size_t end_line = lines.size();
  for (std::size_t f = 0; f < fields.size(); ++f) {
    if (!seen[f]) {
      add(v, std::string("abc.header.") + fields[f], {1, 1},
          std::string("missing ") + fields[f] + ": header field");
    }
  }
  const auto [body, line_no] = last_abc_body_line(lines);
  if (body.empty()) {
    add(v, "abc.bar_terminated", {end_line, 1}, "tune body is empty");
  } else if (body.back() != '|' && !(body.size() >= 2 && body.substr(body.size() - 2) == "|]")) {
    add(v, "abc.bar_terminated", {line_no, body.size()}, "tune body must end with a bar line");
  }
}

void check_jianpu_structure(std::string_view text, FormatVerdict& v) {
  if (text.find("1=") == std::string_view::npos) {
    add(v, "jianpu.key_directive", {1, 1}, "missing key directive 1=<tonic>");
  }
  const auto body = trim(text);
  if (text.find('|') == std::string_view::npos) {
    add(v, "jianpu.measure_bars", {1, 1}, "no measure bars");
  } else if (!body.empty() && body.back() != '|') {
    add(v, "jianpu.measure_bars", {split_lines(text).size(), 1}, "final measure is not closed by a bar");
  }
}

}  // namespace

FormatVerdict validate_format(std::string_view text, NotationFormat format, const Tuning& tuning) {
  FormatVerdict verdict;
  if (format == NotationFormat::Staff) check_abc_structure(text, verdict);
  if (format == NotationFormat::Jianpu) check_jianpu_structure(text, verdict);

  try {
    const auto doc = parse_notation(text, format, tuning);
    for (const auto& issue : doc.rest_issues) add(verdict, issue.rule_id, issue.where, issue.message);
  } catch (const ParseError& e) {
    if (!has_rule(verdict, e.rule_id())) add(verdict, e.rule_id(), e.where(), e.detail());
  } catch (const Error& e) {
    add(verdict, std::string(to_string(format)) + ".syntax", {}, e.what());
  }
  verdict.legal = verdict.violations.empty();
  return verdict;
}

}  // namespace notegrade
