/**
 * @file abc_parser.cpp
 * @brief ABC subset reader producing a ScoreDoc.
 */
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "notegrade/parsers.hpp"
#include "text_lines.hpp"

namespace notegrade {
namespace {

constexpr int kMaxDurationNumber = 1024;
constexpr int kMaxSlashes = 6;

// Letter order used for key-signature accidentals.
constexpr std::string_view kSharpOrder = "FCGDAEB";
constexpr std::string_view kFlatOrder = "BEADGCF";

int natural_pitch_class(char upper) {
  switch (upper) {
    case 'C': return 0;
    case 'D': return 2;
    case 'E': return 4;
    case 'F': return 5;
    case 'G': return 7;
    case 'A': return 9;
    default: return 11;  // 'B'
  }
}

/// Key plus the per-letter alteration implied by its signature.
struct AbcKey {
  KeySignature key;
  std::array<int, 7> alteration{};  // indexed by letter - 'A'
};

AbcKey parse_abc_key(std::string_view value, SourceLocation where) {
  auto fail = [&](const std::string& why) {
    return ParseError("abc.key", where, "K: field '" + std::string(value) + "': " + why);
  };
  auto tokens = split_whitespace(value);
  if (tokens.empty()) throw fail("empty key");

  std::string_view tonic = tokens[0];
  std::string mode;
  // "Cmaj", "F#major" glue the mode to the tonic.
  std::size_t tonic_len = 1;
  if (tonic.size() > 1 && (tonic[1] == '#' || tonic[1] == 'b')) tonic_len = 2;
  mode = std::string(tonic.substr(std::min(tonic_len, tonic.size())));
  tonic = tonic.substr(0, std::min(tonic_len, tonic.size()));
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].find('=') != std::string_view::npos) continue;  // clef=..., middle=...
    if (!mode.empty()) throw fail("unexpected token '" + std::string(tokens[i]) + "'");
    mode = std::string(tokens[i]);
  }

  const char letter = tonic.empty() ? '\0' : tonic[0];
  if (letter < 'A' || letter > 'G') throw fail("tonic must be A-G");

  AbcKey out;
  try {
    out.key = KeySignature::parse(std::string(tonic) + mode);
  } catch (const DomainError& e) {
    throw fail(e.what());
  }

  static const std::map<std::string, int, std::less<>> kSignatures = {
      {"C", 0},   {"G", 1},   {"D", 2},   {"A", 3},   {"E", 4},   {"B", 5},   {"F#", 6}, {"C#", 7},
      {"F", -1},  {"Bb", -2}, {"Eb", -3}, {"Ab", -4}, {"Db", -5}, {"Gb", -6}, {"Cb", -7}};
  const auto it = kSignatures.find(tonic);
  if (it == kSignatures.end()) throw fail("no standard major key signature for '" + std::string(tonic) + "'");
  const int count = it->second;
  for (int i = 0; i < std::abs(count); ++i) {
    const char l = count > 0 ? kSharpOrder[static_cast<std::size_t>(i)] : kFlatOrder[static_cast<std::size_t>(i)];
    out.alteration[static_cast<std::size_t>(l - 'A')] = count > 0 ? 1 : -1;
  }
  return out;
}

TimeSignature parse_abc_meter(std::string_view value, SourceLocation where) {
  const auto text = trim(value);
  if (text == "C") return TimeSignature(4, 4);
  if (text == "C|") return TimeSignature(2, 2);
  try {
    return TimeSignature::parse(text);
  } catch (const DomainError& e) {
    throw ParseError("abc.meter", where, e.what());
  }
}

Rational parse_unit_length(std::string_view value, SourceLocation where) {
  const auto text = trim(value);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos || text.size() > 12) {
    throw ParseError("abc.unit_length", where, "L: must be 1/N");
  }
  Rational r;
  try {
    r = parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError("abc.unit_length", where, e.what());
  }
  if (r <= 0) throw ParseError("abc.unit_length", where, "L: must be positive");
  return r;
}

Rational default_unit_length(const TimeSignature& meter) {
  return Rational(meter.numerator(), meter.denominator()) < Rational(3, 4) ? Rational(1, 16) : Rational(1, 8);
}

bool is_field_line(std::string_view line) {
  return line.size() >= 2 && std::isalpha(static_cast<unsigned char>(line[0])) && line[1] == ':';
}

std::string_view strip_comment(std::string_view line) {
  const auto pct = line.find('%');
  return pct == std::string_view::npos ? line : line.substr(0, pct);
}

class AbcBodyReader {
 public:
  AbcBodyReader(ScoreDoc& doc, AbcKey key) : doc_(doc), key_(std::move(key)) {}

  void set_key(AbcKey key) { key_ = std::move(key); }

  void read_line(std::string_view line, std::size_t line_no) {
    line_ = line;
    line_no_ = line_no;
    pos_ = 0;
    while (pos_ < line_.size()) {
      const char c = line_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '\\') {
        ++pos_;
      } else if (c == '|') {
        read_bar();
      } else if (c == '[') {
        if (peek(1) == '|') {
          pos_ += 2;
          close_measure();
        } else if (std::isalpha(static_cast<unsigned char>(peek(1))) && peek(2) == ':') {
          throw unsupported("inline field");
        } else {
          read_chord();
        }
      } else if (c == '-') {
        if (!last_event()) throw ParseError("abc.syntax", here(), "tie without a preceding note");
        last_event()->tie_to_next = true;
        ++pos_;
      } else if (c == 'z') {
        const auto at = here();
        ++pos_;
        const Rational length = read_length();
        push_event({}, length * doc_.unit_length * 4, at);
      } else if (is_note_start(c)) {
        const auto at = here();
        auto pitch = read_pitch();
        const Rational length = read_length();
        if (!pitch) {
          push_event({}, length * doc_.unit_length * 4, at);
        } else {
          push_event({*pitch}, length * doc_.unit_length * 4, at);
        }
      } else if (std::string_view(":()<>!~.\"{}+xZyHLMOPSTuv").find(c) != std::string_view::npos) {
        throw unsupported(std::string("'") + c + "'");
      } else {
        throw ParseError("abc.syntax", here(), std::string("unknown glyph '") + printable(c) + "'");
      }
    }
  }

  void finish() {
    if (!current_.events.empty()) {
      current_.bar_terminated = false;
      doc_.measures.push_back(std::move(current_));
      current_ = {};
    }
  }

 private:
  static bool is_note_start(char c) {
    return c == '^' || c == '_' || c == '=' || (c >= 'A' && c <= 'G') || (c >= 'a' && c <= 'g');
  }

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

  ParseError unsupported(const std::string& what) const {
    return ParseError("abc.unsupported", here(), "unsupported ABC construct " + what);
  }

  Event* last_event() { return current_.events.empty() ? nullptr : &current_.events.back(); }

  void read_bar() {
    ++pos_;
    if (peek(0) == ':') throw unsupported("repeat bar");
    if (peek(0) == '|' || peek(0) == ']') ++pos_;
    if (peek(0) == ':') throw unsupported("repeat bar");
    close_measure();
  }

  void close_measure() {
    accidentals_.clear();
    if (current_.events.empty()) return;
    current_.bar_terminated = true;
    doc_.measures.push_back(std::move(current_));
    current_ = {};
    onset_ = 0;
  }

  void push_event(std::vector<MidiPitch> pitches, const Rational& beats, SourceLocation at) {
    if (beats <= 0) throw ParseError("abc.duration", at, "duration must be positive");
    Event e;
    e.onset_beats = onset_;
    e.duration_beats = beats;
    e.pitches = pitches.empty() ? std::move(pitches) : sort_chord(pitches);
    onset_ += beats;
    current_.events.push_back(std::move(e));
  }

  int read_number() {
    int value = 0;
    std::size_t digits = 0;
    while (std::isdigit(static_cast<unsigned char>(peek(0)))) {
      if (++digits > 4) throw ParseError("abc.duration_range", here(), "duration number too large");
      value = value * 10 + (peek(0) - '0');
      ++pos_;
    }
    if (value > kMaxDurationNumber) {
      throw ParseError("abc.duration_range", here(), "duration number above 1024");
    }
    return value;
  }

  /// Length multiplier relative to L:, e.g. "3/2", "/", "//", "2".
  Rational read_length() {
    Rational length = 1;
    if (std::isdigit(static_cast<unsigned char>(peek(0)))) {
      const int n = read_number();
      if (n == 0) throw ParseError("abc.duration", here(), "zero-length note");
      length = n;
    }
    int slashes = 0;
    while (peek(0) == '/') {
      if (++slashes > kMaxSlashes) throw ParseError("abc.duration_range", here(), "too many '/' divisors");
      ++pos_;
      int divisor = 2;
      if (std::isdigit(static_cast<unsigned char>(peek(0)))) {
        divisor = read_number();
        if (divisor == 0) throw ParseError("abc.duration", here(), "division by zero");
      }
      length /= divisor;
    }
    return length;
  }

  /// Reads accidentals, letter and octave marks. Returns nullopt for a rest
  /// written with an accidental (recorded as a rest issue).
  std::optional<MidiPitch> read_pitch() {
    const auto at = here();
    std::optional<int> explicit_alteration;
    while (peek(0) == '^' || peek(0) == '_' || peek(0) == '=') {
      const char a = peek(0);
      const int delta = a == '^' ? 1 : a == '_' ? -1 : 0;
      if (!explicit_alteration) {
        explicit_alteration = delta;
      } else if (a == '=' || *explicit_alteration == 0 || (*explicit_alteration > 0) != (delta > 0) ||
                 std::abs(*explicit_alteration) >= 2) {
        throw ParseError("abc.syntax", here(), "malformed accidental");
      } else {
        *explicit_alteration += delta;
      }
      ++pos_;
    }
    const char letter = peek(0);
    if (letter == 'z') {
      ++pos_;
      doc_.rest_issues.push_back({"abc.rest_form", at, "accidental applied to a rest"});
      return std::nullopt;
    }
    if (!((letter >= 'A' && letter <= 'G') || (letter >= 'a' && letter <= 'g'))) {
      throw ParseError("abc.syntax", here(), "accidental without a note letter");
    }
    ++pos_;
    const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(letter)));
    int octave = letter >= 'a' ? 5 : 4;
    while (peek(0) == '\'' || peek(0) == ',') {
      octave += peek(0) == '\'' ? 1 : -1;
      ++pos_;
      if (octave < -2 || octave > 11) throw ParseError("abc.pitch_range", at, "octave marks out of range");
    }

    const auto slot = std::make_pair(upper, octave);
    int alteration = key_.alteration[static_cast<std::size_t>(upper - 'A')];
    if (explicit_alteration) {
      alteration = *explicit_alteration;
      accidentals_[slot] = alteration;
    } else if (auto it = accidentals_.find(slot); it != accidentals_.end()) {
      alteration = it->second;
    }
    const int midi = (octave + 1) * 12 + natural_pitch_class(upper) + alteration;
    if (midi < kMinMidi || midi > kMaxMidi) {
      throw ParseError("abc.pitch_range", at, "note outside MIDI 0..127");
    }
    return MidiPitch(midi);
  }

  void read_chord() {
    const auto at = here();
    ++pos_;  // '['
    std::vector<MidiPitch> pitches;
    std::optional<Rational> first_length;
    bool saw_rest = false;
    while (peek(0) != ']') {
      const char c = peek(0);
      if (c == '\0') throw ParseError("abc.syntax", at, "unterminated chord");
      if (c == ' ') {
        ++pos_;
        continue;
      }
      if (c == 'z') {
        ++pos_;
        saw_rest = true;
        const Rational length = read_length();
        if (!first_length) first_length = length;
        continue;
      }
      if (!is_note_start(c)) {
        throw ParseError("abc.syntax", here(), std::string("unexpected '") + printable(c) + "' in chord");
      }
      auto pitch = read_pitch();
      const Rational length = read_length();
      if (!first_length) first_length = length;
      if (pitch) pitches.push_back(*pitch);
      else saw_rest = true;
    }
    ++pos_;  // ']'
    if (saw_rest) doc_.rest_issues.push_back({"abc.rest_form", at, "rest inside a chord"});
    if (!first_length) throw ParseError("abc.syntax", at, "empty chord");
    const Rational outer = read_length();
    push_event(std::move(pitches), *first_length * outer * doc_.unit_length * 4, at);
  }

  ScoreDoc& doc_;
  AbcKey key_;
  Measure current_;
  Rational onset_ = 0;
  std::map<std::pair<char, int>, int> accidentals_;
  std::string_view line_;
  std::size_t line_no_ = 0;
  std::size_t pos_ = 0;
};

}  // namespace

ScoreDoc parse_abc(std::string_view text) {
  if (trim(text).empty()) throw ParseError("abc.empty", {1, 1}, "empty input");

  ScoreDoc doc;
  doc.format = NotationFormat::Staff;
  std::optional<AbcKey> key;
  std::optional<TimeSignature> meter;
  std::optional<Rational> unit;
  std::optional<AbcBodyReader> body;

  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = strip_comment(lines[i]);
    if (trim(line).empty()) continue;

    if (is_field_line(line)) {
      const char field = line[0];
      const auto value = line.substr(2);
      const SourceLocation where{line_no, 1};
      if (field == 'K') {
        auto parsed = parse_abc_key(value, where);
        if (!key) doc.key = parsed.key;
        key = parsed;
        if (body) body->set_key(parsed);
      } else if (field == 'M') {
        meter = parse_abc_meter(value, where);
        if (!body) doc.meter = *meter;
      } else if (field == 'L') {
        unit = parse_unit_length(value, where);
        doc.unit_length = *unit;
      }
      continue;
    }

    if (!body) {
      if (!key) throw ParseError("abc.header.K", {line_no, 1}, "missing K: header before the tune body");
      if (!meter) throw ParseError("abc.header.M", {line_no, 1}, "missing M: header before the tune body");
      if (!unit) doc.unit_length = default_unit_length(*meter);
      body.emplace(doc, *key);
    }
    body->read_line(line, line_no);
  }

  if (!key) throw ParseError("abc.header.K", {lines.size(), 1}, "missing K: header");
  if (!meter) throw ParseError("abc.header.M", {lines.size(), 1}, "missing M: header");
  if (body) body->finish();
  if (doc.measures.empty()) throw ParseError("abc.empty_body", {lines.size(), 1}, "tune body has no notes");
  return doc;
}

}  // namespace notegrade
