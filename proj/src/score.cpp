/**
 * @file score.cpp
 * @brief Small value types shared by the parsers.
 */
#include "notegrade/score.hpp"

#include <charconv>

namespace notegrade {

std::string_view to_string(NotationFormat format) {
  switch (format) {
    case NotationFormat::Staff: return "staff";
    case NotationFormat::Jianpu: return "jianpu";
    case NotationFormat::Tab: return "tab";
  }
  return "staff";
}

NotationFormat parse_format(std::string_view name) {
  if (name == "staff" || name == "abc" || name == "abc_staff") return NotationFormat::Staff;
  if (name == "jianpu") return NotationFormat::Jianpu;
  if (name == "tab" || name == "ascii_tab") return NotationFormat::Tab;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected staff, jianpu or tab)");
}

TimeSignature::TimeSignature(int numerator, int denominator)
    : numerator_(numerator), denominator_(denominator) {
  if (numerator_ <= 0 || numerator_ > 64) {
    throw DomainError("meter numerator " + std::to_string(numerator_) + " outside 1..64");
  }
  switch (denominator_) {
    case 1: case 2: case 4: case 8: case 16: case 32: break;
    default: throw DomainError("meter denominator " + std::to_string(denominator_) + " not in {1,2,4,8,16,32}");
  }
}

TimeSignature TimeSignature::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw DomainError("meter '" + std::string(text) + "' is not N/D");
  auto read = [&](std::string_view part) {
    int value = 0;
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || end != part.data() + part.size() || part.empty()) {
      throw DomainError("meter '" + std::string(text) + "' is not N/D");
    }
    return value;
  };
  return TimeSignature(read(text.substr(0, slash)), read(text.substr(slash + 1)));
}

Rational TimeSignature::measure_beats() const { return Rational(4 * numerator_, denominator_); }

std::string TimeSignature::to_string() const {
  return std::to_string(numerator_) + "/" + std::to_string(denominator_);
}

Rational Measure::total_beats() const {
  Rational sum = 0;
  for (const auto& e : events) sum += e.duration_beats;
  return sum;
}

std::size_t ScoreDoc::event_count() const {
  std::size_t n = 0;
  for (const auto& m : measures) n += m.events.size();
  return n;
}

}  // namespace notegrade
