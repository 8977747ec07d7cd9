#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "errors.hpp"

namespace motzkin {

/// Exact scalar field of the abstract algebra: arbitrary-precision rationals
/// kept in lowest terms with a positive denominator.
using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q". Throws DomainError on malformed input or a
/// zero denominator.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto is_int = [](std::string_view t) {
    if (!t.empty() && (t.front() == '-' || t.front() == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+')
    throw DomainError("malformed rational '" + s + "'");
  if (num.front() == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw DomainError("zero denominator in '" + s + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational pow(const Rational& base, int exponent) {
  Rational out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

/// Validates the standing parameter range 0 < lambda <= 1/3.
inline void require_lambda_in_range(const Rational& lambda) {
  if (lambda <= 0 || lambda > Rational(1, 3))
    throw DomainError("lambda must lie in (0, 1/3], got " + to_string(lambda));
}

}  // namespace motzkin
