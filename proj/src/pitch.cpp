/**
 * @file pitch.cpp
 * @brief Pitch arithmetic shared by the parsers and projection.
 */
#include "notegrade/pitch.hpp"

#include <algorithm>
#include <cctype>

#include "notegrade/errors.hpp"

namespace notegrade {
namespace {

constexpr std::array<int, kStringCount> kStandardTuning = {64, 59, 55, 50, 45, 40};
constexpr std::array<int, 7> kMajorIntervals = {0, 2, 4, 5, 7, 9, 11};

// Sharp-canonical spelling of each pitch class.
constexpr std::array<char, 12> kPcLetter = {'C', 'C', 'D', 'D', 'E', 'F', 'F', 'G', 'G', 'A', 'A', 'B'};
constexpr std::array<bool, 12> kPcSharp = {false, true, false, true, false, false,
                                           true, false, true, false, true, false};

int letter_pitch_class(char letter) {
  switch (letter) {
    case 'C': return 0;
    case 'D': return 2;
    case 'E': return 4;
    case 'F': return 5;
    case 'G': return 7;
    case 'A': return 9;
    case 'B': return 11;
    default: return -1;
  }
}

int checked_midi(int value, const char* what) {
  if (value < kMinMidi || value > kMaxMidi) {
    throw ConversionError(std::string(what) + " produced MIDI " + std::to_string(value) +
                          " outside 0..127");
  }
  return value;
}

}  // namespace

MidiPitch::MidiPitch(int value) : value_(checked_midi(value, "pitch")) {}

std::string ScientificPitch::to_string() const {
  std::string out(1, letter);
  if (accidental == Accidental::Sharp) out += '#';
  out += std::to_string(octave);
  return out;
}

Tuning::Tuning() : base_(kStandardTuning) {}

Tuning::Tuning(std::array<int, kStringCount> base) : base_(base) {
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (base_[i] < kMinMidi || base_[i] > kMaxMidi) {
      throw DomainError("tuning value " + std::to_string(base_[i]) + " outside 0..127");
    }
    if (i > 0 && base_[i] >= base_[i - 1]) {
      throw DomainError("tuning must strictly decrease from string 1 to string 6");
    }
  }
}

int Tuning::open_string(int string_number) const {
  if (string_number < 1 || string_number > kStringCount) {
    throw DomainError("string number " + std::to_string(string_number) + " outside 1..6");
  }
  return base_[static_cast<std::size_t>(string_number - 1)];
}

KeySignature::KeySignature(int tonic_pitch_class) : tonic_(tonic_pitch_class) {
  if (tonic_ < 0 || tonic_ > 11) {
    throw DomainError("tonic pitch class " + std::to_string(tonic_) + " outside 0..11");
  }
}

KeySignature KeySignature::parse(std::string_view name) {
  const std::string original(name);
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.remove_prefix(1);
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.remove_suffix(1);
  if (name.empty()) throw DomainError("empty key name");

  int pc = letter_pitch_class(static_cast<char>(std::toupper(static_cast<unsigned char>(name.front()))));
  if (pc < 0) throw DomainError("unknown key '" + original + "'");
  name.remove_prefix(1);
  if (!name.empty() && (name.front() == '#' || name.front() == 'b')) {
    pc += name.front() == '#' ? 1 : -1;
    name.remove_prefix(1);
  }
  while (!name.empty() && name.front() == ' ') name.remove_prefix(1);

  std::string mode;
  for (char c : name) mode += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (!(mode.empty() || mode == "maj" || mode == "major" || mode == "ion" || mode == "ionian")) {
    throw DomainError("unsupported key mode in '" + original + "' (major keys only)");
  }
  return KeySignature((pc + 12) % 12);
}

std::string KeySignature::name() const {
  std::string out(1, kPcLetter[static_cast<std::size_t>(tonic_)]);
  if (kPcSharp[static_cast<std::size_t>(tonic_)]) out += '#';
  return out;
}

KeySignature KeySignature::transposed(int semitones) const {
  return KeySignature(((tonic_ + semitones) % 12 + 12) % 12);
}

int major_interval(int degree) {
  if (degree < 1 || degree > 7) {
    throw DomainError("scale degree " + std::to_string(degree) + " outside 1..7");
  }
  return kMajorIntervals[static_cast<std::size_t>(degree - 1)];
}

MidiPitch tab_to_midi(const TabEvent& event, const Tuning& tuning) {
  if (event.fret < 0 || event.fret > kMaxFret) {
    throw DomainError("fret " + std::to_string(event.fret) + " outside 0..24");
  }
  return MidiPitch(checked_midi(tuning.open_string(event.string_number) + event.fret, "tab conversion"));
}

MidiPitch jianpu_to_midi(const JianpuNote& note, const KeySignature& key) {
  if (note.degree == 0) throw DomainError("rest (degree 0) has no pitch");
  const long long value = static_cast<long long>(key.base_midi()) + major_interval(note.degree) +
                          12LL * note.octave_shift;
  if (value < kMinMidi || value > kMaxMidi) {
    throw ConversionError("jianpu conversion produced MIDI " + std::to_string(value) +
                          " outside 0..127");
  }
  return MidiPitch(static_cast<int>(value));
}

ScientificPitch midi_to_scientific(MidiPitch m) {
  const auto pc = static_cast<std::size_t>(m.value() % 12);
  return ScientificPitch{kPcLetter[pc], kPcSharp[pc] ? Accidental::Sharp : Accidental::Natural,
                         m.value() / 12 - 1};
}

MidiPitch scientific_to_midi(const ScientificPitch& p) {
  const int pc = letter_pitch_class(p.letter);
  if (pc < 0) throw DomainError(std::string("pitch letter '") + p.letter + "' outside A..G");
  const int offset = p.accidental == Accidental::Sharp ? 1 : 0;
  return MidiPitch(checked_midi((p.octave + 1) * 12 + pc + offset, "pitch name"));
}

MidiPitch scientific_to_midi(std::string_view name) {
  const std::string original(name);
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("pitch.syntax", {1, 1}, "malformed pitch '" + original + "': " + why);
  };
  if (name.empty()) throw fail("empty");
  const int pc = letter_pitch_class(name.front());
  if (pc < 0) throw fail("expected letter A-G");
  name.remove_prefix(1);

  int offset = 0;
  if (!name.empty() && (name.front() == '#' || name.front() == 'b')) {
    offset = name.front() == '#' ? 1 : -1;
    name.remove_prefix(1);
  }
  bool negative = false;
  if (!name.empty() && name.front() == '-') {
    negative = true;
    name.remove_prefix(1);
  }
  if (name.size() != 1 || !std::isdigit(static_cast<unsigned char>(name.front()))) {
    throw fail("expected octave -1..9");
  }
  int octave = name.front() - '0';
  if (negative) {
    if (octave != 1) throw fail("octave below -1");
    octave = -1;
  }
  return MidiPitch(checked_midi((octave + 1) * 12 + pc + offset, "pitch name"));
}

std::vector<MidiPitch> sort_chord(std::span<const MidiPitch> frame) {
  if (frame.empty()) throw DomainError("empty chord frame");
  std::vector<MidiPitch> out(frame.begin(), frame.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace notegrade
