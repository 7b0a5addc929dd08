/**
 * @file jianpu_parser.cpp
 * @brief Plain-text numbered notation reader.
 */
#include <cctype>
#include <optional>
#include <string>

#include "notegrade/parsers.hpp"
#include "text_lines.hpp"

namespace notegrade {
namespace {

constexpr int kMaxUnderscores = 6;
constexpr int kMaxOctaveMarks = 4;

class JianpuReader {
 public:
  explicit JianpuReader(ScoreDoc& doc) : doc_(doc) {}

  void read_line(std::string_view line, std::size_t line_no) {
    line_ = line;
    line_no_ = line_no;
    pos_ = 0;
    while (pos_ < line_.size()) {
      const char c = line_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '1' && peek(1) == '=') {
        read_key_directive();
      } else if (std::isdigit(static_cast<unsigned char>(c)) && is_meter_ahead()) {
        read_meter();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        read_note();
      } else if (c == '-') {
        extend_previous();
      } else if (c == '|') {
        ++pos_;
        if (peek(0) == '|') ++pos_;
        close_measure();
      } else {
        throw ParseError("jianpu.syntax", here(), std::string("unknown glyph '") + printable(c) + "'");
      }
    }
  }

  void finish(std::size_t last_line) {
    if (!current_.events.empty()) {
      current_.bar_terminated = false;
      doc_.measures.push_back(std::move(current_));
      current_ = {};
    }
    if (!key_seen_) throw ParseError("jianpu.key_directive", {last_line, 1}, "missing key directive 1=<tonic>");
  }

 private:
  static std::string printable(char c) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isprint(u)) return std::string(1, c);
    static const char* hex = "0123456789ABCDEF";
    return std::string("\\x") + hex[u >> 4] + hex[u & 15];
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < line_.size() ? line_[pos_ + ahead] : '\0';
  }

  SourceLocation here() const { return {line_no_, pos_ + 1}; }

  bool is_meter_ahead() const {
    std::size_t i = pos_;
    while (i < line_.size() && std::isdigit(static_cast<unsigned char>(line_[i]))) ++i;
    return i < line_.size() && line_[i] == '/';
  }

  void read_key_directive() {
    const auto at = here();
    pos_ += 2;
    const std::size_t start = pos_;
    while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) && line_[pos_] != '|') ++pos_;
    const auto name = line_.substr(start, pos_ - start);
    try {
      doc_.key = KeySignature::parse(name);
    } catch (const DomainError& e) {
      throw ParseError("jianpu.key_directive", at, e.what());
    }
    key_seen_ = true;
  }

  void read_meter() {
    const auto at = here();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && (std::isdigit(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '/')) {
      ++pos_;
      if (pos_ - start > 8) throw ParseError("jianpu.meter", at, "meter token too long");
    }
    try {
      doc_.meter = TimeSignature::parse(line_.substr(start, pos_ - start));
    } catch (const DomainError& e) {
      throw ParseError("jianpu.meter", at, e.what());
    }
    doc_.has_meter = true;
  }

  void read_note() {
    const auto at = here();
    const int degree = line_[pos_] - '0';
    if (degree > 7) throw ParseError("jianpu.degree_range", at, "scale degree " + std::to_string(degree) + " outside 0..7");
    if (!key_seen_) throw ParseError("jianpu.key_directive", at, "note before the key directive 1=<tonic>");
    ++pos_;

    int octave = 0;
    int octave_marks = 0;
    int halvings = 0;
    while (peek(0) == '\'' || peek(0) == ',' || peek(0) == '_') {
      const char m = peek(0);
      if (m == '_') {
        if (++halvings > kMaxUnderscores) throw ParseError("jianpu.duration_range", here(), "too many '_' marks");
      } else {
        if (++octave_marks > kMaxOctaveMarks) throw ParseError("jianpu.pitch_range", here(), "too many octave marks");
        octave += m == '\'' ? 1 : -1;
      }
      ++pos_;
    }

    Event e;
    e.onset_beats = onset_;
    e.duration_beats = Rational(1, 1 << halvings);
    if (degree == 0) {
      if (octave_marks > 0) doc_.rest_issues.push_back({"jianpu.rest_form", at, "octave mark on a rest"});
    } else {
      try {
        e.pitches.push_back(jianpu_to_midi(JianpuNote{degree, octave, e.duration_beats}, doc_.key));
      } catch (const ConversionError& err) {
        throw ParseError("jianpu.pitch_range", at, err.what());
      }
    }
    onset_ += e.duration_beats;
    current_.events.push_back(std::move(e));
  }

  void extend_previous() {
    if (current_.events.empty()) {
      throw ParseError("jianpu.dangling_dash", here(), "'-' without a preceding note in this measure");
    }
    current_.events.back().duration_beats += 1;
    onset_ += 1;
    ++pos_;
  }

  void close_measure() {
    if (current_.events.empty()) return;
    current_.bar_terminated = true;
    doc_.measures.push_back(std::move(current_));
    current_ = {};
    onset_ = 0;
  }

  ScoreDoc& doc_;
  Measure current_;
  Rational onset_ = 0;
  bool key_seen_ = false;
  std::string_view line_;
  std::size_t line_no_ = 0;
  std::size_t pos_ = 0;
};

}  // namespace

ScoreDoc parse_jianpu(std::string_view text) {
  if (trim(text).empty()) throw ParseError("jianpu.empty", {1, 1}, "empty input");
  ScoreDoc doc;
  doc.format = NotationFormat::Jianpu;
  doc.has_meter = false;
  doc.unit_length = 1;

  JianpuReader reader(doc);
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) reader.read_line(lines[i], i + 1);
  reader.finish(lines.size());
  if (doc.measures.empty()) throw ParseError("jianpu.empty_body", {lines.size(), 1}, "no notes");
  return doc;
}

}  // namespace notegrade
