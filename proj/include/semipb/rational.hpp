#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace semipb {

/// Arbitrary-precision rational number. Always kept in canonical (reduced) form.
using Rational = mpq_class;

/// A row of rationals: one entry per state of some target space.
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "-p/q" or an integer string. Throws Error(Parse) on anything
/// else, including a zero denominator and surrounding whitespace.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p/q" with q > 1, or "p" when the value is an integer.
std::string to_string(const Rational& value);

Rational sum(const RationalVector& values);

/// Reduces every entry in place. Values built as mpq_class(p, q) are not
/// reduced automatically, and comparisons assume reduced operands.
void canonicalize(RationalVector& values);

}  // namespace semipb
