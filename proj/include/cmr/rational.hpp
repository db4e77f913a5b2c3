#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cmr {

/// Exact rational with arbitrary-precision numerator and denominator.
/// GMP keeps every value canonical: positive denominator, reduced, zero as 0/1.
using Rational = mpq_class;

/// num/den in canonical form. Prefer this to mpq_class(num, den), which
/// leaves the fraction unreduced.
inline Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Always renders as "num/den", including integers ("2/1").
std::string to_fraction_string(const Rational& r);

/// Human form: "2", "-3/4".
std::string to_display_string(const Rational& r);

/// Accepts "n", "-n", "n/d", "-n/d" with d > 0. Throws ValidationError otherwise.
Rational parse_rational(std::string_view text);

}  // namespace cmr
