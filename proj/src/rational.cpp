/**
 * @file rational.cpp
 * @brief Rational parsing and formatting.
 */
#include "notegrade/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace notegrade {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

boost::multiprecision::cpp_int to_int(std::string_view digits) {
  boost::multiprecision::cpp_int v = 0;
  for (char c : digits) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string original(text);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  // Guards against pathological inputs; no legitimate value needs this many digits.
  if (text.size() > 64) throw std::invalid_argument("rational too long: '" + original + "'");

  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("malformed rational: '" + original + "'");
    }
    auto d = to_int(den);
    if (d == 0) throw std::invalid_argument("zero denominator: '" + original + "'");
    value = Rational(to_int(num), d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw std::invalid_argument("malformed decimal: '" + original + "'");
    }
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(whole.empty() ? 0 : to_int(whole)) +
            Rational(frac.empty() ? 0 : to_int(frac), scale);
  } else {
    if (!all_digits(text)) throw std::invalid_argument("malformed number: '" + original + "'");
    value = Rational(to_int(text));
  }
  return negative ? Rational(-value) : value;
}

std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace notegrade
