/**
 * @file parsers_test.cpp
 * @brief Tests for the ABC, Jianpu, tab and ground-truth readers and format validation.
 */
#include "notegrade/parsers.hpp"

#include <gtest/gtest.h>

#include <random>

namespace notegrade {
namespace {

std::vector<std::vector<int>> pitch_lists(const ScoreDoc& doc) {
  std::vector<std::vector<int>> out;
  for (const auto& m : doc.measures) {
    for (const auto& e : m.events) {
      std::vector<int> p;
      for (auto x : e.pitches) p.push_back(x.value());
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Rational> durations(const ScoreDoc& doc) {
  std::vector<Rational> out;
  for (const auto& m : doc.measures) {
    for (const auto& e : m.events) out.push_back(e.duration_beats);
  }
  return out;
}

std::string rule_of(std::string_view text, NotationFormat format) {
  try {
    parse_notation(text, format);
  } catch (const ParseError& e) {
    return e.rule_id();
  }
  return "";
}

const char* kSixLineTab =
    "e|-0-|\n"
    "B|-1-|\n"
    "G|-0-|\n"
    "D|-2-|\n"
    "A|-3-|\n"
    "E|---|\n";

// ---------------------------------------------------------------- ABC

TEST(ParseAbc, ScaleFragment) {
  const auto doc = parse_abc("X:1\nK:C\nM:4/4\nL:1/4\nC D E F|");
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{60}, {62}, {64}, {65}}));
  EXPECT_EQ(durations(doc), (std::vector<Rational>{1, 1, 1, 1}));
  ASSERT_EQ(doc.measures.size(), 1u);
  EXPECT_TRUE(doc.measures[0].bar_terminated);
  EXPECT_EQ(doc.meter, TimeSignature(4, 4));
}

TEST(ParseAbc, ChordWithMultiplier) {
  const auto doc = parse_abc("K:C\nM:4/4\nL:1/4\n[CEG]2|");
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{60, 64, 67}}));
  EXPECT_EQ(durations(doc), (std::vector<Rational>{2}));
}

TEST(ParseAbc, WholeMeasureRest) {
  const auto doc = parse_abc("K:C\nM:4/4\nL:1/4\nz4|");
  ASSERT_EQ(doc.event_count(), 1u);
  EXPECT_TRUE(doc.measures[0].events[0].is_rest());
  EXPECT_EQ(doc.measures[0].events[0].duration_beats, 4);
}

TEST(ParseAbc, OctaveMarksAndLowercase) {
  const auto doc = parse_abc("K:C\nM:4/4\nL:1/4\nC, C c c'|");
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{48}, {60}, {72}, {84}}));
}

TEST(ParseAbc, DurationMultipliersAndDivisors) {
  const auto doc = parse_abc("K:C\nM:4/4\nL:1/8\nC C2 C/ C// C3/2 C/3|");
  EXPECT_EQ(durations(doc), (std::vector<Rational>{Rational(1, 2), 1, Rational(1, 4), Rational(1, 8),
                                                  Rational(3, 4), Rational(1, 6)}));
}

TEST(ParseAbc, DefaultUnitLengthFollowsMeter) {
  EXPECT_EQ(parse_abc("K:C\nM:4/4\nC|").unit_length, Rational(1, 8));
  EXPECT_EQ(parse_abc("K:C\nM:2/4\nC|").unit_length, Rational(1, 16));
}

TEST(ParseAbc, KeySignatureAndBarScopedAccidentals) {
  // G major sharpens F; ^c persists within the bar, the bar line resets it.
  const auto doc = parse_abc("K:G\nM:4/4\nL:1/4\nF ^c c =F|c F|");
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{66}, {73}, {73}, {65}, {72}, {66}}));
  const auto flat = parse_abc("K:Bb\nM:4/4\nL:1/4\nB E e A|");
  EXPECT_EQ(pitch_lists(flat), (std::vector<std::vector<int>>{{70}, {63}, {75}, {69}}));
  const auto sharp7 = parse_abc("K:C#\nM:4/4\nL:1/4\nB, C E B|");
  EXPECT_EQ(pitch_lists(sharp7), (std::vector<std::vector<int>>{{60}, {61}, {65}, {72}}));
}

TEST(ParseAbc, TiesMarkEvents) {
  const auto doc = parse_abc("K:C\nM:4/4\nL:1/4\nC2- C2|");
  ASSERT_EQ(doc.event_count(), 2u);
  EXPECT_TRUE(doc.measures[0].events[0].tie_to_next);
  EXPECT_FALSE(doc.measures[0].events[1].tie_to_next);
}

TEST(ParseAbc, MeasuresAndOnsets) {
  const auto doc = parse_abc("X:1\nT:t\nM:3/4\nL:1/4\nK:D\n|D2 F|A3|]\n");
  ASSERT_EQ(doc.measures.size(), 2u);
  EXPECT_EQ(doc.measures[0].events[1].onset_beats, 2);
  EXPECT_EQ(doc.measures[0].total_beats(), 3);
  EXPECT_EQ(doc.measures[1].total_beats(), 3);
  EXPECT_EQ(doc.key.tonic(), 2);
}

TEST(ParseAbc, UnterminatedFinalMeasure) {
  const auto doc = parse_abc("K:C\nM:4/4\nL:1/4\nC D E F|G A");
  ASSERT_EQ(doc.measures.size(), 2u);
  EXPECT_FALSE(doc.measures[1].bar_terminated);
}

TEST(ParseAbc, CommentsAndIgnoredFields) {
  const auto doc = parse_abc("X:1 % tune\nC:someone\nQ:1/4=120\nM:C\nL:1/4\nK:C\n% comment\nC D E F|\n");
  EXPECT_EQ(doc.event_count(), 4u);
  EXPECT_EQ(doc.meter, TimeSignature(4, 4));
}

TEST(ParseAbc, RestIssuesAreRecorded) {
  EXPECT_EQ(parse_abc("K:C\nM:4/4\nL:1/4\n[zC]4|").rest_issues.size(), 1u);
  EXPECT_EQ(parse_abc("K:C\nM:4/4\nL:1/4\n^z4|").rest_issues.size(), 1u);
  EXPECT_TRUE(parse_abc("K:C\nM:4/4\nL:1/4\nz4|").rest_issues.empty());
}

TEST(ParseAbc, Errors) {
  EXPECT_EQ(rule_of("M:4/4\nL:1/4\nC D|", NotationFormat::Staff), "abc.header.K");
  EXPECT_EQ(rule_of("K:C\nL:1/4\nC D|", NotationFormat::Staff), "abc.header.M");
  EXPECT_EQ(rule_of("K:C\nM:4/4\nC $ D|", NotationFormat::Staff), "abc.syntax");
  EXPECT_EQ(rule_of("K:C\nM:4/4\n|: C D :|", NotationFormat::Staff), "abc.unsupported");
  EXPECT_EQ(rule_of("K:C\nM:4/4\n(3CDE|", NotationFormat::Staff), "abc.unsupported");
  EXPECT_EQ(rule_of("K:Am\nM:4/4\nC|", NotationFormat::Staff), "abc.key");
  EXPECT_EQ(rule_of("K:C\nM:5/7\nC|", NotationFormat::Staff), "abc.meter");
  EXPECT_EQ(rule_of("K:C\nM:4/4\nC0|", NotationFormat::Staff), "abc.duration");
  EXPECT_EQ(rule_of("K:C\nM:4/4\nC99999|", NotationFormat::Staff), "abc.duration_range");
  EXPECT_EQ(rule_of("K:C\nM:4/4\nc''''''''|", NotationFormat::Staff), "abc.pitch_range");
  EXPECT_EQ(rule_of("K:C\nM:4/4\n[CE|", NotationFormat::Staff), "abc.syntax");
  EXPECT_EQ(rule_of("K:C\nM:4/4\n", NotationFormat::Staff), "abc.empty_body");
  EXPECT_EQ(rule_of("", NotationFormat::Staff), "abc.empty");
}

TEST(ParseAbc, ErrorCarriesLocation) {
  try {
    parse_abc("K:C\nM:4/4\nC D $|");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where().line, 3u);
    EXPECT_EQ(e.where().column, 5u);
  }
}

// ---------------------------------------------------------------- Jianpu

TEST(ParseJianpu, Examples) {
  const auto doc = parse_jianpu("1=C 4/4\n1 2 3 5 |");
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{60}, {62}, {64}, {67}}));
  EXPECT_EQ(durations(doc), (std::vector<Rational>{1, 1, 1, 1}));

  const auto held = parse_jianpu("1=C 4/4\n5 - - - |");
  EXPECT_EQ(pitch_lists(held), (std::vector<std::vector<int>>{{67}}));
  EXPECT_EQ(durations(held), (std::vector<Rational>{4}));

  const auto high = parse_jianpu("1=G 4/4\n1' |");
  EXPECT_EQ(pitch_lists(high), (std::vector<std::vector<int>>{{79}}));
}

TEST(ParseJianpu, UnderscoresOctavesAndRests) {
  const auto doc = parse_jianpu("1=D 2/4\n1_ 7,_ 0 | 3'__ 3__ 3_ 5 |");
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{62}, {61}, {}, {78}, {66}, {66}, {69}}));
  EXPECT_EQ(durations(doc), (std::vector<Rational>{Rational(1, 2), Rational(1, 2), 1, Rational(1, 4),
                                                  Rational(1, 4), Rational(1, 2), 1}));
  EXPECT_EQ(doc.meter, TimeSignature(2, 4));
  EXPECT_TRUE(doc.has_meter);
  EXPECT_EQ(doc.measures.size(), 2u);
}

TEST(ParseJianpu, AdjacentNotesWithoutSpaces) {
  const auto doc = parse_jianpu("1=C\n1_2_3_4_|");
  EXPECT_EQ(doc.event_count(), 4u);
  EXPECT_FALSE(doc.has_meter);
}

TEST(ParseJianpu, RestWithOctaveMarkIsRecorded) {
  EXPECT_EQ(parse_jianpu("1=C 4/4\n0' 1 1 1 |").rest_issues.size(), 1u);
}

TEST(ParseJianpu, Errors) {
  EXPECT_EQ(rule_of("4/4\n1 2 3 |", NotationFormat::Jianpu), "jianpu.key_directive");
  EXPECT_EQ(rule_of("1=C 4/4\n1 9 3 |", NotationFormat::Jianpu), "jianpu.degree_range");
  EXPECT_EQ(rule_of("1=C 4/4\n| - 1 |", NotationFormat::Jianpu), "jianpu.dangling_dash");
  EXPECT_EQ(rule_of("1=C 4/4\n1 x |", NotationFormat::Jianpu), "jianpu.syntax");
  EXPECT_EQ(rule_of("1=H 4/4\n1 |", NotationFormat::Jianpu), "jianpu.key_directive");
  EXPECT_EQ(rule_of("1=C 4/3\n1 |", NotationFormat::Jianpu), "jianpu.meter");
  EXPECT_EQ(rule_of("1=C 4/4\n|", NotationFormat::Jianpu), "jianpu.empty_body");
}

// ---------------------------------------------------------------- Tab

TEST(ParseAsciiTab, ChordColumn) {
  const auto doc = parse_ascii_tab(kSixLineTab);
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{48, 52, 55, 60, 64}}));
  EXPECT_FALSE(doc.has_key);
}

TEST(ParseAsciiTab, SingleOpenString) {
  const auto doc = parse_ascii_tab("e|-0-|\nB|---|\nG|---|\nD|---|\nA|---|\nE|---|\n");
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{64}}));
}

TEST(ParseAsciiTab, MultiDigitFretIsGreedy) {
  const auto doc = parse_ascii_tab("e|-12-|\nB|----|\nG|----|\nD|----|\nA|----|\nE|----|\n");
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{76}}));
}

TEST(ParseAsciiTab, FramesFollowColumnsAndBars) {
  const auto doc = parse_ascii_tab(
      "e|-0---3-|-1-|\n"
      "B|---1---|---|\n"
      "G|-------|---|\n"
      "D|-------|---|\n"
      "A|-------|---|\n"
      "E|-------|-0-|\n");
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{64}, {60}, {67}, {40, 65}}));
  ASSERT_EQ(doc.measures.size(), 2u);
  int last = -1;
  for (const auto& m : doc.measures) {
    for (const auto& e : m.events) {
      EXPECT_GT(e.source_column, last);
      last = e.source_column;
      EXPECT_EQ(e.duration_beats, 1);
    }
  }
  EXPECT_EQ(doc.measures[0].events[2].onset_beats, 2);
}

TEST(ParseAsciiTab, TuningOverride) {
  const Tuning drop_d({64, 59, 55, 50, 45, 38});
  const auto doc = parse_ascii_tab("e|---|\nB|---|\nG|---|\nD|---|\nA|---|\nE|-0-|\n", drop_d);
  EXPECT_EQ(pitch_lists(doc), (std::vector<std::vector<int>>{{38}}));
}

TEST(ParseAsciiTab, Errors) {
  EXPECT_EQ(rule_of("e|-0-|\nB|---|\nG|---|\nD|---|\nA|---|\n", NotationFormat::Tab), "tab.six_lines");
  EXPECT_EQ(rule_of("e|-0-|\nB|---|\nG|---|\nD|---|\nA|---|\nE|---|\nE|---|\n", NotationFormat::Tab),
            "tab.six_lines");
  EXPECT_EQ(rule_of("e|-0-|\nB|----|\nG|---|\nD|---|\nA|---|\nE|---|\n", NotationFormat::Tab), "tab.ragged");
  EXPECT_EQ(rule_of("e|-x-|\nB|---|\nG|---|\nD|---|\nA|---|\nE|---|\n", NotationFormat::Tab), "tab.syntax");
  EXPECT_EQ(rule_of("B|-0-|\ne|---|\nG|---|\nD|---|\nA|---|\nE|---|\n", NotationFormat::Tab), "tab.labels");
  EXPECT_EQ(rule_of("e|-25|\nB|---|\nG|---|\nD|---|\nA|---|\nE|---|\n", NotationFormat::Tab), "tab.fret_range");
  EXPECT_EQ(rule_of("e|123|\nB|---|\nG|---|\nD|---|\nA|---|\nE|---|\n", NotationFormat::Tab), "tab.fret_range");
  EXPECT_EQ(rule_of("e|-|-|\nB|---|\nG|---|\nD|---|\nA|---|\nE|---|\n", NotationFormat::Tab), "tab.ragged_bar");
  EXPECT_EQ(rule_of("e|---|\nB|---|\nG|---|\nD|---|\nA|---|\nE|---|\n", NotationFormat::Tab), "tab.empty_body");
}

// ---------------------------------------------------------------- Ground truth

TEST(ParseGroundTruth, MinimalDocument) {
  const auto gt = parse_ground_truth(
      R"({"id":"s1","format":"staff","key":"C","meter":"4/4",
          "events":[{"onset_beats":"0/1","duration_beats":"1/1","midi":[60]}]})");
  EXPECT_EQ(gt.id, "s1");
  ASSERT_EQ(gt.events.size(), 1u);
  EXPECT_EQ(gt.events[0].midi, std::vector<int>{60});
  EXPECT_FALSE(gt.tempo_bpm.has_value());
}

TEST(ParseGroundTruth, ResortsEventsStably) {
  const auto gt = parse_ground_truth(
      R"({"id":"s","format":"jianpu","key":"F#","meter":"3/4","tempo_bpm":96,"extra":true,
          "events":[{"onset_beats":"2/1","duration_beats":"1/1","midi":[64]},
                    {"onset_beats":"0/1","duration_beats":"1/2","midi":[60]},
                    {"onset_beats":"0/1","duration_beats":"1/2","midi":[67]},
                    {"onset_beats":"1/2","duration_beats":"3/2","midi":[]}]})");
  ASSERT_EQ(gt.events.size(), 4u);
  EXPECT_EQ(gt.events[0].midi, std::vector<int>{60});
  EXPECT_EQ(gt.events[1].midi, std::vector<int>{67});
  EXPECT_EQ(gt.events[2].onset_beats, Rational(1, 2));
  EXPECT_EQ(gt.events[3].onset_beats, 2);
  EXPECT_EQ(gt.key.tonic(), 6);
  EXPECT_EQ(*gt.tempo_bpm, 96.0);
}

TEST(ParseGroundTruth, SchemaErrors) {
  const std::string ok_event = R"({"onset_beats":"0/1","duration_beats":"1/1","midi":[60]})";
  auto doc = [](const std::string& event, const std::string& head = R"("id":"x","format":"staff","key":"C","meter":"4/4")") {
    return "{" + head + ",\"events\":[" + event + "]}";
  };
  EXPECT_NO_THROW(parse_ground_truth(doc(ok_event)));
  EXPECT_THROW(parse_ground_truth(doc(R"({"onset_beats":"0/1","duration_beats":"1/1","midi":[128]})")), SchemaError);
  EXPECT_THROW(parse_ground_truth(doc(R"({"onset_beats":"0/1","duration_beats":"0/1","midi":[60]})")), SchemaError);
  EXPECT_THROW(parse_ground_truth(doc(R"({"onset_beats":"0","duration_beats":"1/1","midi":[60]})")), SchemaError);
  EXPECT_THROW(parse_ground_truth(doc(R"({"onset_beats":"0/1","duration_beats":"1/0","midi":[60]})")), SchemaError);
  EXPECT_THROW(parse_ground_truth(doc(R"({"onset_beats":"0/1","duration_beats":"1/1","midi":[60.5]})")), SchemaError);
  EXPECT_THROW(parse_ground_truth(doc(R"({"onset_beats":"0/1","duration_beats":"1/1"})")), SchemaError);
  EXPECT_THROW(parse_ground_truth(doc(ok_event, R"("id":"x","format":"midi","key":"C","meter":"4/4")")), SchemaError);
  EXPECT_THROW(parse_ground_truth(doc(ok_event, R"("id":"x","format":"staff","meter":"4/4")")), SchemaError);
  EXPECT_THROW(parse_ground_truth(doc(ok_event, R"("id":"x","format":"staff","key":"C","meter":"4/5")")), SchemaError);
  EXPECT_THROW(parse_ground_truth(doc(ok_event, R"("id":7,"format":"staff","key":"C","meter":"4/4")")), SchemaError);
  EXPECT_THROW(parse_ground_truth("not json"), SchemaError);
  EXPECT_THROW(parse_ground_truth("[]"), SchemaError);
  EXPECT_THROW(parse_ground_truth(std::string(10000, '[')), SchemaError);
}

// ---------------------------------------------------------------- Validation

bool has_violation(const FormatVerdict& v, const std::string& rule) {
  for (const auto& x : v.violations) {
    if (x.rule_id == rule) return true;
  }
  return false;
}

TEST(ValidateFormat, LegalExamples) {
  EXPECT_TRUE(validate_format("X:1\nK:C\nM:4/4\nL:1/4\nC D E F|", NotationFormat::Staff).legal);
  EXPECT_TRUE(validate_format("1=C 4/4\n1 2 3 5 |", NotationFormat::Jianpu).legal);
  EXPECT_TRUE(validate_format(kSixLineTab, NotationFormat::Tab).legal);
}

TEST(ValidateFormat, StructuralRules) {
  const auto five = validate_format("e|-0-|\nB|---|\nG|---|\nD|---|\nA|---|\n", NotationFormat::Tab);
  EXPECT_FALSE(five.legal);
  EXPECT_TRUE(has_violation(five, "tab.six_lines"));

  const auto nine = validate_format("1=C 4/4\n1 9 3 |", NotationFormat::Jianpu);
  EXPECT_FALSE(nine.legal);
  EXPECT_TRUE(has_violation(nine, "jianpu.degree_range"));

  const auto no_x = validate_format("K:C\nM:4/4\nL:1/4\nC D E F|", NotationFormat::Staff);
  EXPECT_FALSE(no_x.legal);
  EXPECT_TRUE(has_violation(no_x, "abc.header.X"));

  const auto open_end = validate_format("X:1\nK:C\nM:4/4\nL:1/4\nC D E F", NotationFormat::Staff);
  EXPECT_TRUE(has_violation(open_end, "abc.bar_terminated"));

  const auto no_bars = validate_format("1=C 4/4\n1 2 3 5", NotationFormat::Jianpu);
  EXPECT_TRUE(has_violation(no_bars, "jianpu.measure_bars"));

  const auto bad_rest = validate_format("X:1\nK:C\nM:4/4\nL:1/4\n[zC]4|", NotationFormat::Staff);
  EXPECT_TRUE(has_violation(bad_rest, "abc.rest_form"));

  const auto empty = validate_format("", NotationFormat::Staff);
  EXPECT_FALSE(empty.legal);
}

TEST(ValidateFormat, LegalImpliesParseable) {
  std::mt19937 rng(77);
  const std::string alphabet = "CDEFGABcdefgabz|[]^_=,'/2348 \n-";
  const std::string header = "X:1\nK:G\nM:3/4\nL:1/8\n";
  int legal_count = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string body;
    std::uniform_int_distribution<int> len(1, 30);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    for (int i = len(rng); i > 0; --i) body += alphabet[pick(rng)];
    const auto text = header + body;
    if (validate_format(text, NotationFormat::Staff).legal) {
      ++legal_count;
      EXPECT_NO_THROW(parse_abc(text)) << text;
    }
  }
  EXPECT_GT(legal_count, 0);
}

TEST(Parsers, Deterministic) {
  const std::string abc = "X:1\nK:D\nM:6/8\nL:1/8\nD2F A2d|[DFA]6|]";
  EXPECT_EQ(parse_abc(abc), parse_abc(abc));
  EXPECT_EQ(parse_jianpu("1=Eb 3/4\n1 3_ 5_ 1'|"), parse_jianpu("1=Eb 3/4\n1 3_ 5_ 1'|"));
  EXPECT_EQ(parse_ascii_tab(kSixLineTab), parse_ascii_tab(kSixLineTab));
}

}  // namespace
}  // namespace notegrade
