#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace corxc {

/// Exact rational number backed by GMP. Always kept in canonical form.
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" (q nonzero). Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical "p" or "p/q" rendering.
std::string to_string(const Rational& value);

/// Least common multiple of the denominators, as an integer.
mpz_class common_denominator(const Rational* first, const Rational* last);

}  // namespace corxc
