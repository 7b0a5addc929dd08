/**
 * @file projection.cpp
 * @brief Flattening of ScoreDoc and GroundTruth into canonical sequences.
 */
#include "notegrade/projection.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

namespace notegrade {

PitchToken::PitchToken(std::vector<MidiPitch> pitches) : midi_(sort_chord(pitches)) {}

std::vector<ScientificPitch> PitchToken::pitches() const {
  std::vector<ScientificPitch> out;
  out.reserve(midi_.size());
  for (auto m : midi_) out.push_back(midi_to_scientific(m));
  return out;
}

std::string PitchToken::text() const {
  std::string out;
  for (std::size_t i = 0; i < midi_.size(); ++i) {
    if (i) out += '+';
    out += midi_to_scientific(midi_[i]).to_string();
  }
  return out;
}

PitchToken PitchToken::parse(std::string_view text) {
  std::vector<MidiPitch> pitches;
  std::size_t start = 0;
  while (true) {
    const auto plus = text.find('+', start);
    pitches.push_back(scientific_to_midi(text.substr(start, plus - start)));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return PitchToken(std::move(pitches));
}

CanonicalSequence project(const ScoreDoc& doc) {
  CanonicalSequence seq;
  seq.source_format = doc.format;
  bool tie_open = false;
  for (const auto& measure : doc.measures) {
    for (const auto& event : measure.events) {
      if (event.is_rest()) {
        tie_open = false;
        continue;
      }
      PitchToken token(event.pitches);
      if (tie_open && !seq.tokens.empty() && seq.tokens.back() == token) {
        seq.durations.back() += event.duration_beats;
      } else {
        seq.tokens.push_back(std::move(token));
        seq.durations.push_back(event.duration_beats);
      }
      tie_open = event.tie_to_next;
    }
  }
  return seq;
}

CanonicalSequence project(const GroundTruth& gt) {
  // Events sharing an onset form one temporal frame.
  std::map<Rational, std::pair<std::vector<MidiPitch>, Rational>> frames;
  for (const auto& event : gt.events) {
    if (event.midi.empty()) continue;
    auto& [pitches, duration] = frames[event.onset_beats];
    for (int m : event.midi) {
      try {
        pitches.emplace_back(m);
      } catch (const ConversionError& e) {
        throw ProjectionError(e.what());
      }
    }
    duration = std::max(duration, event.duration_beats);
  }
  CanonicalSequence seq;
  seq.source_format = gt.format;
  for (auto& [onset, frame] : frames) {
    seq.tokens.emplace_back(std::move(frame.first));
    seq.durations.push_back(frame.second);
  }
  return seq;
}

std::vector<std::string> tokenize(const CanonicalSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.tokens.size());
  for (const auto& t : seq.tokens) out.push_back(t.text());
  return out;
}

std::vector<std::string> quantize_durations(const CanonicalSequence& seq, const Rational& grid) {
  if (grid <= 0) throw ConfigError("quantization grid must be positive");
  std::vector<std::string> out;
  out.reserve(seq.durations.size());
  for (const auto& d : seq.durations) {
    // floor(d / grid + 1/2): nearest multiple, ties upward.
    const Rational steps = d / grid + Rational(1, 2);
    const auto whole = boost::multiprecision::numerator(steps) / boost::multiprecision::denominator(steps);
    out.push_back(to_fraction_string(Rational(whole) * grid));
  }
  return out;
}

std::string to_json(const CanonicalSequence& seq) {
  nlohmann::ordered_json j;
  j["tokens"] = tokenize(seq);
  auto durations = nlohmann::ordered_json::array();
  for (const auto& d : seq.durations) durations.push_back(to_fraction_string(d));
  j["durations"] = std::move(durations);
  return j.dump(2);
}

}  // namespace notegrade
