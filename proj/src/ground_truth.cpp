/**
 * @file ground_truth.cpp
 * @brief Ground-truth JSON annotation reader.
 */
#include <algorithm>

#include <json.hpp>

#include "notegrade/parsers.hpp"

namespace notegrade {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* field, const std::string& context) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw SchemaError(context + ": missing required field \"" + field + "\"");
  return *it;
}

std::string require_string(const json& obj, const char* field, const std::string& context) {
  const auto& v = require(obj, field, context);
  if (!v.is_string()) throw SchemaError(context + ": field \"" + field + "\" must be a string");
  return v.get<std::string>();
}

Rational require_fraction(const json& obj, const char* field, const std::string& context) {
  const auto text = require_string(obj, field, context);
  if (text.find('/') == std::string::npos) {
    throw SchemaError(context + ": field \"" + field + "\" must be a \"num/den\" string");
  }
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(context + ": field \"" + field + "\": " + e.what());
  }
}

// Nesting bound checked before handing text to the recursive JSON parser.
constexpr int kMaxJsonDepth = 64;

void check_depth(std::string_view text) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      if (++depth > kMaxJsonDepth) throw SchemaError("ground truth JSON nested too deeply");
    } else if (c == ']' || c == '}') {
      --depth;
    }
  }
}

}  // namespace

GroundTruth parse_ground_truth(std::string_view json_text) {
  check_depth(json_text);
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("ground truth is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("ground truth must be a JSON object");

  GroundTruth gt;
  gt.id = require_string(doc, "id", "ground truth");
  const std::string context = "ground truth '" + gt.id + "'";

  const auto format = require_string(doc, "format", context);
  if (format == "staff") gt.format = NotationFormat::Staff;
  else if (format == "jianpu") gt.format = NotationFormat::Jianpu;
  else if (format == "tab") gt.format = NotationFormat::Tab;
  else throw SchemaError(context + ": format must be \"staff\", \"jianpu\" or \"tab\"");

  try {
    gt.key = KeySignature::parse(require_string(doc, "key", context));
    gt.meter = TimeSignature::parse(require_string(doc, "meter", context));
  } catch (const DomainError& e) {
    throw SchemaError(context + ": " + e.what());
  }

  if (const auto it = doc.find("tempo_bpm"); it != doc.end()) {
    if (!it->is_number()) throw SchemaError(context + ": tempo_bpm must be a number");
    gt.tempo_bpm = it->get<double>();
  }

  const auto& events = require(doc, "events", context);
  if (!events.is_array()) throw SchemaError(context + ": events must be an array");
  gt.events.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    const std::string where = context + " event " + std::to_string(i);
    if (!ev.is_object()) throw SchemaError(where + ": must be an object");
    GroundTruthEvent out;
    out.onset_beats = require_fraction(ev, "onset_beats", where);
    out.duration_beats = require_fraction(ev, "duration_beats", where);
    if (out.onset_beats < 0) throw SchemaError(where + ": onset_beats must be >= 0");
    if (out.duration_beats <= 0) throw SchemaError(where + ": duration_beats must be > 0");
    const auto& midi = require(ev, "midi", where);
    if (!midi.is_array()) throw SchemaError(where + ": midi must be an array");
    for (const auto& m : midi) {
      if (!m.is_number_integer()) throw SchemaError(where + ": midi values must be integers");
      const auto value = m.get<long long>();
      if (value < kMinMidi || value > kMaxMidi) {
        throw SchemaError(where + ": midi value " + std::to_string(value) + " outside 0..127");
      }
      out.midi.push_back(static_cast<int>(value));
    }
    gt.events.push_back(std::move(out));
  }
  std::stable_sort(gt.events.begin(), gt.events.end(),
                   [](const auto& a, const auto& b) { return a.onset_beats < b.onset_beats; });
  return gt;
}

}  // namespace notegrade
