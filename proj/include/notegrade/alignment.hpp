/**
 * @file alignment.hpp
 * @brief Levenshtein alignment accuracy and the weighted hybrid task metric.
 */
#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "notegrade/rational.hpp"

namespace notegrade {

/// Unit-cost insert/delete/substitute distance. Memory is linear in the shorter input.
std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b);

struct AccuracyScore {
  Rational value;  // in [0, 1]
  std::size_t ed = 0;
  std::size_t len_gt = 0;
  std::size_t len_pred = 0;
};

/// max(0, 1 - ED / max(|gt|, |pred|)). Both empty scores 1; exactly one empty scores 0.
AccuracyScore alignment_accuracy(std::span<const std::string> gt, std::span<const std::string> pred);

class MetricWeights {
 public:
  /// 0.5 / 0.3 / 0.2.
  MetricWeights();
  /// Throws ConfigError on negative weights or a sum other than 1.
  MetricWeights(Rational pitch, Rational duration, Rational format);

  /// "p,d,f" with decimal or num/den entries. Throws ConfigError.
  static MetricWeights parse(std::string_view text);

  /// Drops the duration weight and rescales the others to sum to 1. Used for
  /// tablature, which carries no rhythm. Unchanged when pitch + format is 0.
  MetricWeights without_duration() const;

  const Rational& pitch() const noexcept { return pitch_; }
  const Rational& duration() const noexcept { return duration_; }
  const Rational& format() const noexcept { return format_; }

 private:
  Rational pitch_;
  Rational duration_;
  Rational format_;
};

/// w_pitch * acc_pitch + w_dur * acc_dur + w_fmt * [fmt_legal].
Rational hybrid_score(const Rational& acc_pitch, const Rational& acc_dur, bool fmt_legal,
                      const MetricWeights& weights);

}  // namespace notegrade
