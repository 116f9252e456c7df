#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdio>
#include <string>
#include <string_view>

#include "regen/error.hpp"

namespace regen {

// Expression templates off: keeps std::min, auto and lambdas well behaved.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

inline Integer numer(const Rational& r) {
  return boost::multiprecision::numerator(r);
}
inline Integer denom(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

inline bool is_integer(const Rational& r) { return denom(r) == 1; }

// Throws DegenerateConfiguration instead of dividing by zero.
inline Rational checked_div(const Rational& num, const Rational& den,
                            std::string_view what) {
  if (den == 0) {
    throw Error(ErrorCode::DegenerateConfiguration,
                std::string("zero denominator in ") + std::string(what));
  }
  return num / den;
}

/// Renders as "p/q", or "p" when the denominator is one.
inline std::string to_fraction_string(const Rational& r) {
  if (is_integer(r)) return numer(r).str();
  return numer(r).str() + "/" + denom(r).str();
}

/// Decimal rendering with 12 significant digits.
inline std::string to_decimal_string(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", r.convert_to<double>());
  return buf;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace detail {

inline Integer parse_integer(std::string_view s, std::string_view whole) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = s[pos] == '-';
    ++pos;
  }
  if (pos == s.size()) {
    throw Error(ErrorCode::ParseError,
                "not a number: '" + std::string(whole) + "'");
  }
  Integer value = 0;
  for (; pos < s.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos]))) {
      throw Error(ErrorCode::ParseError,
                  "not a number: '" + std::string(whole) + "'");
    }
    value = value * 10 + (s[pos] - '0');
  }
  return negative ? Integer(-value) : value;
}

}  // namespace detail

/// Parses "p", "p/q" or a plain decimal such as "1.25" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty number");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer p = detail::parse_integer(s.substr(0, slash), text);
    Integer q = detail::parse_integer(s.substr(slash + 1), text);
    if (q == 0) throw Error(ErrorCode::ParseError, "zero denominator: '" + std::string(text) + "'");
    return Rational(p, q);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if (int_part.empty() && frac_part.empty()) {
      throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
    }
    Integer whole = int_part.empty() ? Integer(0) : detail::parse_integer(int_part, text);
    Integer scale = 1;
    Integer frac = 0;
    if (!frac_part.empty()) {
      if (frac_part.front() == '-' || frac_part.front() == '+') {
        throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
      }
      frac = detail::parse_integer(frac_part, text);
      for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    }
    Rational value = Rational(whole) + Rational(frac, scale);
    return negative ? Rational(-value) : value;
  }
  return Rational(detail::parse_integer(s, text));
}

}  // namespace regen
