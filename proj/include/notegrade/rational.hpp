/**
 * @file rational.hpp
 * @brief Exact rational numbers used for durations, weights and scores.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace notegrade {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "num/den", a plain integer, or a decimal such as "0.25" or "-1.5".
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" text. Integers keep the "/1" suffix.
std::string to_fraction_string(const Rational& r);

double to_double(const Rational& r);

}  // namespace notegrade
