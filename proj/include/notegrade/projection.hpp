/**
 * @file projection.hpp
 * @brief Canonical pitch-sequence projection shared by every format.
 *
 * A score or annotation flattens into chronologically ordered pitch tokens.
 * Simultaneous pitches form one token sorted by height, so the order in which
 * a chord was written never affects the result. Rests do not produce tokens.
 */
#pragma once

#include <string>
#include <vector>

#include "notegrade/score.hpp"

namespace notegrade {

class PitchToken {
 public:
  /// Sorts and de-duplicates. Throws DomainError on an empty pitch list.
  explicit PitchToken(std::vector<MidiPitch> pitches);

  const std::vector<MidiPitch>& midi() const noexcept { return midi_; }
  std::vector<ScientificPitch> pitches() const;
  /// Names joined by '+', e.g. "C4+E4+G4".
  std::string text() const;
  /// Inverse of text(). Throws ParseError.
  static PitchToken parse(std::string_view text);

  bool operator==(const PitchToken&) const = default;

 private:
  std::vector<MidiPitch> midi_;
};

struct CanonicalSequence {
  std::vector<PitchToken> tokens;
  std::vector<Rational> durations;  // parallel to tokens, in beats
  NotationFormat source_format = NotationFormat::Staff;

  bool operator==(const CanonicalSequence&) const = default;
};

CanonicalSequence project(const ScoreDoc& doc);
CanonicalSequence project(const GroundTruth& gt);

std::vector<std::string> tokenize(const CanonicalSequence& seq);

inline const Rational kDefaultGrid{1, 4};

/// Rounds each duration to the nearest multiple of `grid` (ties upward) and
/// renders it as "num/den". Throws ConfigError when grid <= 0.
std::vector<std::string> quantize_durations(const CanonicalSequence& seq, const Rational& grid = kDefaultGrid);

/// {"tokens": [...], "durations": ["num/den", ...]} with two-space indentation.
std::string to_json(const CanonicalSequence& seq);

}  // namespace notegrade
