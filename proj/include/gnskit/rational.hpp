#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gnskit {

using Rational = mpq_class;
using BigInt = mpz_class;

/// num/den in lowest terms. mpq_class(num, den) leaves the fraction
/// uncanonicalized, which breaks comparisons.
inline Rational ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

/// Accepts "p", "-p" or "p/q"; throws InputError otherwise.
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

BigInt lcm(const BigInt& a, const BigInt& b);

}  // namespace gnskit
