#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace kras {

using Integer = mpz_class;

/// Exact rational number. gmpxx keeps every result reduced with a positive
/// denominator, so equality is structural.
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Exact k-th root of a rational, if one exists. For even k the
/// non-negative root is returned.
std::optional<Rational> rational_root(const Rational& value, unsigned long k);

Rational rational_pow(const Rational& base, long exponent);

}  // namespace kras
