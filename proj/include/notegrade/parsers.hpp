/**
 * @file parsers.hpp
 * @brief Readers for ABC, Jianpu, ASCII tab and ground-truth JSON, plus strict format validation.
 *
 * Grammar summary.
 *
 * ABC: header fields X:, T:, M:, L:, K: (other single-letter fields are ignored);
 * notes with ^ _ = accidentals, ' and , octave marks, integer multipliers and
 * '/' divisors; rests `z`; chords `[CEG]`; ties `-`; bars `|`, `||`, `|]`, `[|`.
 * Key signatures and in-bar accidentals follow standard ABC rules.
 *
 * Jianpu: key directive `1=<tonic>` and optional meter `N/D` on a header line;
 * digits 0..7 (0 = rest) each worth one beat; trailing `'` / `,` shift by an
 * octave; each trailing `_` halves the duration; a standalone `-` adds one
 * beat to the previous event; `|` ends a measure.
 *
 * ASCII tab: exactly six lines labelled e| B| G| D| A| E| with equal-length
 * bodies of digits, '-' and '|'. Every column where a fret number starts is
 * one frame of one beat; two adjacent digits form a single fret.
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "notegrade/score.hpp"

namespace notegrade {

ScoreDoc parse_abc(std::string_view text);
ScoreDoc parse_jianpu(std::string_view text);
ScoreDoc parse_ascii_tab(std::string_view text, const Tuning& tuning = Tuning::standard());

/// Dispatches on format.
ScoreDoc parse_notation(std::string_view text, NotationFormat format,
                        const Tuning& tuning = Tuning::standard());

/// Throws SchemaError on any schema violation.
GroundTruth parse_ground_truth(std::string_view json_text);

struct FormatViolation {
  std::string rule_id;
  SourceLocation where;
  std::string message;
};

struct FormatVerdict {
  bool legal = true;
  std::vector<FormatViolation> violations;
};

FormatVerdict validate_format(std::string_view text, NotationFormat format,
                              const Tuning& tuning = Tuning::standard());

}  // namespace notegrade
