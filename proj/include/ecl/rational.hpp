#pragma once

// Exact rational arithmetic used throughout the library.  Tree decisions,
// distribution masses and ball radii are all compared exactly; floating
// point appears only in Monte Carlo estimates and sample-size formulas.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace ecl {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q", "p" or "-p/q".  The denominator must be positive after
// normalization.  Throws DomainError on anything else.
Rational parse_rational(std::string_view text);

// Renders "p" when the denominator is 1, otherwise "p/q" in lowest terms.
std::string rational_str(const Rational& q);

// Least m >= 0 with 2^-m <= r.  Requires 0 < r <= 1.
unsigned ceil_neg_log2(const Rational& r);

// 2^e as a rational, e may be negative.
Rational pow2(int e);

// Bit i (0-based) of the binary expansion of y in [0,1).  Dyadic rationals
// take the terminating expansion: 1/2 -> 1000...
int expansion_bit(const Rational& y, std::size_t i);

}  // namespace ecl
