#pragma once
// Exact rational arithmetic. Analytic credences are always Rats; floating
// point appears only in the Monte Carlo estimator.
//
// Rat is boost's cpp_rational: arbitrary precision, kept in reduced canonical
// form (gcd 1, positive denominator) by the backend.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>

#include "selfloc/error.hpp"

namespace selfloc {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts `p/q` (q a positive integer) or a bare integer; an optional leading
// minus sits on the numerator. No decimals, no whitespace.
inline Rat parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  const std::string num = slash == std::string::npos ? text : text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "" : text.substr(slash + 1);
  auto is_int = [](const std::string& s, bool allow_sign) {
    std::size_t i = (allow_sign && !s.empty() && s[0] == '-') ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (!is_int(num, true) || (slash != std::string::npos && !is_int(den, false)))
    fail(Errc::syntax, "malformed rational '" + text + "'");
  const BigInt n(num);
  const BigInt d = slash == std::string::npos ? BigInt(1) : BigInt(den);
  if (d == 0) fail(Errc::syntax, "zero denominator in '" + text + "'");
  return Rat(n, d);
}

inline bool in_unit_interval(const Rat& r) { return r >= 0 && r <= 1; }

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

// Bit length of the widest component; growth guard for the exact simplex.
inline std::size_t rat_bits(const Rat& r) {
  auto bits = [](const BigInt& v) -> std::size_t {
    return v == 0 ? 0 : static_cast<std::size_t>(msb(v)) + 1;
  };
  return std::max(bits(abs(numerator(r))), bits(denominator(r)));
}

}  // namespace selfloc
