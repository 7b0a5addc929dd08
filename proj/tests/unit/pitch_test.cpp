/**
 * @file pitch_test.cpp
 * @brief Tests for MIDI, scientific pitch, tab and Jianpu arithmetic.
 */
#include "notegrade/pitch.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "notegrade/errors.hpp"
#include "support/oracles.hpp"

namespace notegrade {
namespace {

TEST(TabToMidi, StandardTuningChart) {
  EXPECT_EQ(tab_to_midi({1, 0, 0}).value(), 64);
  EXPECT_EQ(tab_to_midi({6, 0, 0}).value(), 40);
  EXPECT_EQ(tab_to_midi({5, 3, 0}).value(), 48);
}

TEST(TabToMidi, OpenStringIsTuningBase) {
  const Tuning drop_d({64, 59, 55, 50, 45, 38});
  for (int s = 1; s <= 6; ++s) {
    EXPECT_EQ(tab_to_midi({s, 0, 0}).value(), test::chart_midi(test::standard_open_strings()[s - 1]));
    EXPECT_EQ(tab_to_midi({s, 0, 0}, drop_d).value(), drop_d.open_string(s));
  }
}

TEST(TabToMidi, FretMonotonicity) {
  for (int s = 1; s <= 6; ++s) {
    for (int f = 0; f < kMaxFret; ++f) {
      EXPECT_EQ(tab_to_midi({s, f + 1, 0}).value(), tab_to_midi({s, f, 0}).value() + 1);
    }
  }
}

TEST(TabToMidi, RejectsInvalidEvents) {
  EXPECT_THROW(tab_to_midi({0, 0, 0}), DomainError);
  EXPECT_THROW(tab_to_midi({7, 0, 0}), DomainError);
  EXPECT_THROW(tab_to_midi({1, 25, 0}), DomainError);
  EXPECT_THROW(tab_to_midi({1, -1, 0}), DomainError);
  const Tuning high({120, 110, 100, 90, 80, 70});
  EXPECT_THROW(tab_to_midi({1, 10, 0}, high), ConversionError);
}

TEST(Tuning, RejectsNonDecreasingBase) {
  EXPECT_THROW(Tuning({40, 45, 50, 55, 59, 64}), DomainError);
  EXPECT_THROW(Tuning({64, 64, 55, 50, 45, 40}), DomainError);
  EXPECT_THROW(Tuning({128, 59, 55, 50, 45, 40}), DomainError);
}

TEST(JianpuToMidi, Examples) {
  EXPECT_EQ(jianpu_to_midi({1, 0, 1}, KeySignature::parse("C")).value(), 60);
  EXPECT_EQ(jianpu_to_midi({5, 1, 1}, KeySignature::parse("G")).value(), 86);
  EXPECT_EQ(jianpu_to_midi({7, -1, 1}, KeySignature::parse("C")).value(), 59);
}

TEST(JianpuToMidi, RestAndRangeErrors) {
  EXPECT_THROW(jianpu_to_midi({0, 0, 1}, KeySignature()), DomainError);
  EXPECT_THROW(jianpu_to_midi({8, 0, 1}, KeySignature()), DomainError);
  EXPECT_THROW(jianpu_to_midi({1, 6, 1}, KeySignature()), ConversionError);
  EXPECT_THROW(jianpu_to_midi({1, -6, 1}, KeySignature()), ConversionError);
}

TEST(JianpuToMidi, OctaveShiftAddsTwelve) {
  for (int pc = 0; pc < 12; ++pc) {
    const KeySignature key(pc);
    for (int d = 1; d <= 7; ++d) {
      for (int o = -2; o < 2; ++o) {
        EXPECT_EQ(jianpu_to_midi({d, o + 1, 1}, key).value(), jianpu_to_midi({d, o, 1}, key).value() + 12);
      }
    }
  }
}

TEST(KeySignature, ParsesSpellings) {
  EXPECT_EQ(KeySignature::parse("C").tonic(), 0);
  EXPECT_EQ(KeySignature::parse("F#").tonic(), 6);
  EXPECT_EQ(KeySignature::parse("Gb").tonic(), 6);
  EXPECT_EQ(KeySignature::parse("Bb").tonic(), 10);
  EXPECT_EQ(KeySignature::parse("Cb").tonic(), 11);
  EXPECT_EQ(KeySignature::parse("Dmaj").tonic(), 2);
  EXPECT_EQ(KeySignature::parse("E major").tonic(), 4);
  EXPECT_EQ(KeySignature::parse("Bb").name(), "A#");
  EXPECT_THROW(KeySignature::parse("Am"), DomainError);
  EXPECT_THROW(KeySignature::parse("H"), DomainError);
  EXPECT_THROW(KeySignature::parse(""), DomainError);
  EXPECT_THROW(KeySignature(12), DomainError);
}

TEST(MidiToScientific, ChartValues) {
  EXPECT_EQ(midi_to_scientific(MidiPitch(60)).to_string(), "C4");
  EXPECT_EQ(midi_to_scientific(MidiPitch(69)).to_string(), "A4");
  EXPECT_EQ(midi_to_scientific(MidiPitch(61)).to_string(), "C#4");
  EXPECT_EQ(midi_to_scientific(MidiPitch(0)).to_string(), "C-1");
  EXPECT_EQ(midi_to_scientific(MidiPitch(127)).to_string(), "G9");
}

TEST(ScientificToMidi, ParsesAndNormalizesFlats) {
  EXPECT_EQ(scientific_to_midi("C4").value(), 60);
  EXPECT_EQ(scientific_to_midi("Db4").value(), 61);
  EXPECT_EQ(scientific_to_midi("Cb4").value(), 59);
  EXPECT_EQ(scientific_to_midi("B#3").value(), 60);
  EXPECT_EQ(scientific_to_midi("C-1").value(), 0);
  EXPECT_EQ(midi_to_scientific(scientific_to_midi("Db4")).to_string(), "C#4");
}

TEST(ScientificToMidi, MalformedNames) {
  for (const char* bad : {"", "H4", "C", "C#", "C10", "c4", "C-2", "C4x", "C##4"}) {
    EXPECT_THROW(scientific_to_midi(bad), ParseError) << bad;
  }
  EXPECT_THROW(scientific_to_midi("G#9"), ConversionError);
  EXPECT_THROW(scientific_to_midi("Cb-1"), ConversionError);
}

TEST(ScientificToMidi, ExhaustiveRoundTrip) {
  for (int m = kMinMidi; m <= kMaxMidi; ++m) {
    const auto name = midi_to_scientific(MidiPitch(m));
    EXPECT_EQ(scientific_to_midi(name).value(), m);
    EXPECT_EQ(scientific_to_midi(name.to_string()).value(), m);
  }
}

TEST(SortChord, Examples) {
  auto values = [](const std::vector<MidiPitch>& v) {
    std::vector<int> out;
    for (auto p : v) out.push_back(p.value());
    return out;
  };
  EXPECT_EQ(values(sort_chord(std::vector{MidiPitch(64), MidiPitch(60), MidiPitch(67)})),
            (std::vector<int>{60, 64, 67}));
  EXPECT_EQ(values(sort_chord(std::vector{MidiPitch(60)})), (std::vector<int>{60}));
  EXPECT_EQ(values(sort_chord(std::vector{MidiPitch(60), MidiPitch(60), MidiPitch(64)})),
            (std::vector<int>{60, 64}));
  EXPECT_THROW(sort_chord(std::vector<MidiPitch>{}), DomainError);
}

TEST(SortChord, PermutationInvariantAndMatchesSetOracle) {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> pitch(30, 90);
  std::uniform_int_distribution<int> size(1, 8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<MidiPitch> frame;
    std::set<int> oracle;
    for (int i = size(rng); i > 0; --i) {
      const int p = pitch(rng);
      frame.emplace_back(p);
      oracle.insert(p);
    }
    const auto sorted = sort_chord(frame);
    ASSERT_EQ(sorted.size(), oracle.size());
    EXPECT_TRUE(std::equal(sorted.begin(), sorted.end(), oracle.begin(),
                           [](MidiPitch a, int b) { return a.value() == b; }));
    for (int k = 0; k < 5; ++k) {
      std::shuffle(frame.begin(), frame.end(), rng);
      EXPECT_EQ(sort_chord(frame), sorted);
    }
  }
}

TEST(MidiPitch, RangeChecked) {
  EXPECT_THROW(MidiPitch(-1), ConversionError);
  EXPECT_THROW(MidiPitch(128), ConversionError);
  EXPECT_NO_THROW(MidiPitch(127));
}

}  // namespace
}  // namespace notegrade
