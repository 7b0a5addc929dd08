/**
 * @file alignment.cpp
 * @brief Edit distance and accuracy metrics.
 */
#include "notegrade/alignment.hpp"

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "notegrade/errors.hpp"
#include "text_lines.hpp"

namespace notegrade {

std::size_t edit_distance(std::span<const std::string> a_text, std::span<const std::string> b_text) {
  // Intern tokens so the inner loop compares integers.
  std::unordered_map<std::string_view, std::uint32_t> ids;
  auto intern = [&](std::span<const std::string> seq) {
    std::vector<std::uint32_t> out;
    out.reserve(seq.size());
    for (const auto& s : seq) out.push_back(ids.try_emplace(s, static_cast<std::uint32_t>(ids.size())).first->second);
    return out;
  };
  auto a = intern(a_text);
  auto b = intern(b_text);
  if (a.size() < b.size()) std::swap(a, b);
  // b is the shorter sequence; one DP row over it.
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

AccuracyScore alignment_accuracy(std::span<const std::string> gt, std::span<const std::string> pred) {
  AccuracyScore score;
  score.len_gt = gt.size();
  score.len_pred = pred.size();
  const std::size_t longest = std::max(gt.size(), pred.size());
  if (longest == 0) {
    score.value = 1;
    return score;
  }
  score.ed = edit_distance(gt, pred);
  const Rational raw = Rational(1) - Rational(score.ed, longest);
  score.value = raw < 0 ? Rational(0) : raw;
  return score;
}

MetricWeights::MetricWeights() : MetricWeights(Rational(1, 2), Rational(3, 10), Rational(1, 5)) {}

MetricWeights::MetricWeights(Rational pitch, Rational duration, Rational format)
    : pitch_(std::move(pitch)), duration_(std::move(duration)), format_(std::move(format)) {
  if (pitch_ < 0 || duration_ < 0 || format_ < 0) throw ConfigError("metric weights must be non-negative");
  if (pitch_ + duration_ + format_ != 1) {
    throw ConfigError("metric weights must sum to 1 (got " + to_fraction_string(pitch_ + duration_ + format_) + ")");
  }
}

MetricWeights MetricWeights::parse(std::string_view text) {
  std::vector<Rational> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    try {
      parts.push_back(parse_rational(trim(text.substr(start, comma - start))));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("bad weight list '") + std::string(text) + "': " + e.what());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 3) throw ConfigError("weights need exactly three values p,d,f");
  return MetricWeights(parts[0], parts[1], parts[2]);
}

MetricWeights MetricWeights::without_duration() const {
  const Rational rest = pitch_ + format_;
  if (rest == 0) return *this;
  return MetricWeights(pitch_ / rest, Rational(0), format_ / rest);
}

Rational hybrid_score(const Rational& acc_pitch, const Rational& acc_dur, bool fmt_legal,
                      const MetricWeights& weights) {
  return weights.pitch() * acc_pitch + weights.duration() * acc_dur + (fmt_legal ? weights.format() : Rational(0));
}

}  // namespace notegrade
