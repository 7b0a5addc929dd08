/**
 * @file score.hpp
 * @brief Parsed notation documents and ground-truth annotations.
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "notegrade/errors.hpp"
#include "notegrade/pitch.hpp"
#include "notegrade/rational.hpp"

namespace notegrade {

/// Textual notation formats. Staff music is written as ABC.
enum class NotationFormat { Staff, Jianpu, Tab };

/// "staff", "jianpu", "tab".
std::string_view to_string(NotationFormat format);
/// Accepts the names above plus "abc", "abc_staff", "ascii_tab". Throws ConfigError.
NotationFormat parse_format(std::string_view name);

class TimeSignature {
 public:
  TimeSignature() = default;
  /// Throws DomainError unless numerator > 0 and denominator is in {1,2,4,8,16,32}.
  TimeSignature(int numerator, int denominator);

  /// "N/D". Throws DomainError.
  static TimeSignature parse(std::string_view text);

  int numerator() const noexcept { return numerator_; }
  int denominator() const noexcept { return denominator_; }
  /// Measure length in quarter-note beats.
  Rational measure_beats() const;
  std::string to_string() const;

  bool operator==(const TimeSignature&) const = default;

 private:
  int numerator_ = 4;
  int denominator_ = 4;
};

struct Event {
  Rational onset_beats = 0;     // measure-relative
  Rational duration_beats = 1;
  std::vector<MidiPitch> pitches;  // ascending; empty = rest
  bool tie_to_next = false;
  int source_column = -1;       // tab column, -1 elsewhere

  bool is_rest() const noexcept { return pitches.empty(); }
  bool operator==(const Event&) const = default;
};

struct Measure {
  std::vector<Event> events;
  bool bar_terminated = true;  // closed by a bar line

  Rational total_beats() const;
  bool operator==(const Measure&) const = default;
};

/// Recoverable irregularity noticed while parsing (e.g. a malformed rest).
struct ParseNote {
  std::string rule_id;
  SourceLocation where;
  std::string message;
  bool operator==(const ParseNote&) const = default;
};

struct ScoreDoc {
  NotationFormat format = NotationFormat::Staff;
  KeySignature key;
  bool has_key = true;     // false for tab, which carries no key signature
  TimeSignature meter;
  bool has_meter = true;   // false for tab and Jianpu without a meter token
  Rational unit_length{1, 8};
  std::vector<Measure> measures;
  std::vector<ParseNote> rest_issues;

  std::size_t event_count() const;
  bool operator==(const ScoreDoc&) const = default;
};

struct GroundTruthEvent {
  Rational onset_beats;
  Rational duration_beats;
  std::vector<int> midi;
  bool operator==(const GroundTruthEvent&) const = default;
};

struct GroundTruth {
  std::string id;
  NotationFormat format = NotationFormat::Staff;
  KeySignature key;
  TimeSignature meter;
  std::optional<double> tempo_bpm;
  std::vector<GroundTruthEvent> events;  // sorted by onset
  bool operator==(const GroundTruth&) const = default;
};

}  // namespace notegrade
