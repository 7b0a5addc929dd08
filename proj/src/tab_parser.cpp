/**
 * @file tab_parser.cpp
 * @brief Six-line ASCII guitar tablature reader.
 */
#include <cctype>
#include <map>
#include <string>

#include "notegrade/parsers.hpp"
#include "text_lines.hpp"

namespace notegrade {
namespace {

constexpr std::string_view kLabels = "eBGDAE";

struct TabLine {
  std::string_view body;
  std::size_t line_no = 0;
};

}  // namespace

ScoreDoc parse_ascii_tab(std::string_view text, const Tuning& tuning) {
  if (trim(text).empty()) throw ParseError("tab.empty", {1, 1}, "empty input");

  std::vector<TabLine> rows;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim_right(lines[i]);
    if (line.empty()) continue;
    if (line.size() < 2 || kLabels.find(line[0]) == std::string_view::npos || line[1] != '|') {
      throw ParseError("tab.labels", {i + 1, 1}, "tab line must start with one of e| B| G| D| A| E|");
    }
    if (rows.size() < kLabels.size() && line[0] != kLabels[rows.size()]) {
      throw ParseError("tab.labels", {i + 1, 1},
                       std::string("expected label '") + kLabels[rows.size()] + "|' on tab line " +
                           std::to_string(rows.size() + 1));
    }
    rows.push_back({line.substr(2), i + 1});
  }
  if (rows.size() != kLabels.size()) {
    throw ParseError("tab.six_lines", {rows.empty() ? 1 : rows.back().line_no, 1},
                     "expected exactly 6 tab lines, found " + std::to_string(rows.size()));
  }

  const std::size_t width = rows.front().body.size();
  for (const auto& row : rows) {
    if (row.body.size() != width) {
      throw ParseError("tab.ragged", {row.line_no, 3}, "tab lines have unequal lengths");
    }
    for (std::size_t c = 0; c < width; ++c) {
      const char ch = row.body[c];
      if (ch != '-' && ch != '|' && !std::isdigit(static_cast<unsigned char>(ch))) {
        throw ParseError("tab.syntax", {row.line_no, c + 3}, "unexpected character in tab line");
      }
    }
  }

  // Bar columns must be shared by all six strings.
  std::vector<bool> bar_column(width, false);
  for (std::size_t c = 0; c < width; ++c) {
    std::size_t bars = 0;
    for (const auto& row : rows) bars += row.body[c] == '|' ? 1 : 0;
    if (bars != 0 && bars != rows.size()) {
      throw ParseError("tab.ragged_bar", {rows.front().line_no, c + 3}, "bar line not aligned across strings");
    }
    bar_column[c] = bars == rows.size();
  }

  // Fret numbers keyed by the column where they start.
  std::map<std::size_t, std::vector<MidiPitch>> frames;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const auto body = rows[s].body;
    std::size_t c = 0;
    while (c < width) {
      if (!std::isdigit(static_cast<unsigned char>(body[c]))) {
        ++c;
        continue;
      }
      std::size_t run = c;
      while (run < width && std::isdigit(static_cast<unsigned char>(body[run]))) ++run;
      const std::size_t len = run - c;
      const SourceLocation at{rows[s].line_no, c + 3};
      if (len > 2) throw ParseError("tab.fret_range", at, "fret number with more than two digits");
      const int fret = len == 1 ? body[c] - '0' : (body[c] - '0') * 10 + (body[c + 1] - '0');
      if (fret > kMaxFret) throw ParseError("tab.fret_range", at, "fret " + std::to_string(fret) + " above 24");
      try {
        frames[c].push_back(tab_to_midi(TabEvent{static_cast<int>(s) + 1, fret, static_cast<int>(c)}, tuning));
      } catch (const ConversionError& e) {
        throw ParseError("tab.pitch_range", at, e.what());
      }
      c = run;
    }
  }

  ScoreDoc doc;
  doc.format = NotationFormat::Tab;
  doc.has_key = false;
  doc.has_meter = false;
  doc.unit_length = 1;

  Measure current;
  auto frame = frames.begin();
  for (std::size_t c = 0; c <= width; ++c) {
    if (c == width || bar_column[c]) {
      if (!current.events.empty()) {
        current.bar_terminated = c < width;
        doc.measures.push_back(std::move(current));
        current = {};
      }
      continue;
    }
    if (frame != frames.end() && frame->first == c) {
      Event e;
      e.onset_beats = static_cast<long long>(current.events.size());
      e.duration_beats = 1;
      e.pitches = sort_chord(frame->second);
      e.source_column = static_cast<int>(c);
      current.events.push_back(std::move(e));
      ++frame;
    }
  }
  if (doc.measures.empty()) throw ParseError("tab.empty_body", {rows.front().line_no, 1}, "tab contains no fret numbers");
  return doc;
}

ScoreDoc parse_notation(std::string_view text, NotationFormat format, const Tuning& tuning) {
  switch (format) {
    case NotationFormat::Staff: return parse_abc(text);
    case NotationFormat::Jianpu: return parse_jianpu(text);
    case NotationFormat::Tab: return parse_ascii_tab(text, tuning);
  }
  return parse_abc(text);
}

}  // namespace notegrade
