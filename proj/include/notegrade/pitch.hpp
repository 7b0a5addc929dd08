/**
 * @file pitch.hpp
 * @brief MIDI pitch model, scientific pitch names, tablature and Jianpu pitch arithmetic.
 *
 * Every format reduces to MIDI note numbers (0..127) before projection. The
 * helpers here are pure and never hold state.
 */
#pragma once

#include <array>
#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "notegrade/rational.hpp"

namespace notegrade {

inline constexpr int kMinMidi = 0;
inline constexpr int kMaxMidi = 127;
inline constexpr int kMaxFret = 24;
inline constexpr int kStringCount = 6;

/// MIDI value of the tonic of a key in Jianpu arithmetic: C major tonic = 60 (C4).
inline constexpr int kKeyAnchorMidi = 60;

/// Validated MIDI note number.
class MidiPitch {
 public:
  /// Throws ConversionError when value is outside 0..127.
  explicit MidiPitch(int value);

  int value() const noexcept { return value_; }
  auto operator<=>(const MidiPitch&) const = default;

 private:
  int value_;
};

enum class Accidental { Natural, Sharp };

/// Pitch name in scientific notation with sharp-only canonical spelling.
struct ScientificPitch {
  char letter = 'C';  // 'A'..'G'
  Accidental accidental = Accidental::Natural;
  int octave = 4;     // -1..9, MIDI 60 = C4

  /// "C4", "C#4", "A-1".
  std::string to_string() const;
  bool operator==(const ScientificPitch&) const = default;
};

/// Open-string MIDI pitches indexed by string number 1..6 (string 1 highest).
class Tuning {
 public:
  /// Standard EADGBE.
  Tuning();
  /// Throws DomainError unless the six values are valid MIDI and strictly decreasing.
  explicit Tuning(std::array<int, kStringCount> base);

  static Tuning standard() { return Tuning(); }

  int open_string(int string_number) const;
  const std::array<int, kStringCount>& base() const noexcept { return base_; }
  bool operator==(const Tuning&) const = default;

 private:
  std::array<int, kStringCount> base_;
};

/// One fretted note in a tablature column.
struct TabEvent {
  int string_number = 1;  // 1..6
  int fret = 0;           // 0..24
  int column = 0;         // temporal frame index
};

/// Scale degree note in numbered notation. degree 0 is a rest.
struct JianpuNote {
  int degree = 1;
  int octave_shift = 0;
  Rational duration = 1;
};

/// Major key identified by its tonic pitch class (0 = C .. 11 = B).
class KeySignature {
 public:
  KeySignature() = default;
  /// Throws DomainError unless 0 <= tonic_pitch_class <= 11.
  explicit KeySignature(int tonic_pitch_class);

  /// Accepts "C", "F#", "Bb", "Db", optionally followed by "maj"/"major".
  /// Throws DomainError for malformed names or non-major modes.
  static KeySignature parse(std::string_view name);

  int tonic() const noexcept { return tonic_; }
  /// Sharp-canonical tonic name ("C", "C#", ...).
  std::string name() const;
  /// MIDI pitch of degree 1 at octave shift 0.
  int base_midi() const noexcept { return kKeyAnchorMidi + tonic_; }
  /// Key raised by `semitones` (mod 12).
  KeySignature transposed(int semitones) const;

  bool operator==(const KeySignature&) const = default;

 private:
  int tonic_ = 0;
};

/// Semitone offset of major-scale degree 1..7 above the tonic.
int major_interval(int degree);

MidiPitch tab_to_midi(const TabEvent& event, const Tuning& tuning = Tuning::standard());

/// Base(K) + Interval(d) + 12 * octave_shift. Rests (degree 0) throw DomainError.
MidiPitch jianpu_to_midi(const JianpuNote& note, const KeySignature& key);

ScientificPitch midi_to_scientific(MidiPitch m);

MidiPitch scientific_to_midi(const ScientificPitch& p);

/// Parses "C4", "C#4", "Db4", "B-1". Flats normalise to the enharmonic sharp.
/// Throws ParseError on malformed text and ConversionError when outside MIDI range.
MidiPitch scientific_to_midi(std::string_view name);

/// Ascending, duplicate-free chord frame. Throws DomainError on an empty frame.
std::vector<MidiPitch> sort_chord(std::span<const MidiPitch> frame);

}  // namespace notegrade
