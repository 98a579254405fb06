// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace luroth {

using Integer = mpz_class;
// Always canonical: denominator > 0, lowest terms.
using Rational = mpq_class;

// Builds num/den in canonical form. Throws DomainError when den == 0.
Rational make_rational(const Integer& num, const Integer& den);

// Accepts "a/b", "a", and finite decimals such as "0.55" or "-1.25e-3".
// Decimals are converted exactly (0.55 == 11/20).
Rational parse_rational(std::string_view text);

// "num/den" in lowest terms; integers are written as "n/1".
std::string format_rational(const Rational& r);

Integer floor(const Rational& r);
Integer ceil(const Rational& r);

// Largest k with 2^k | n. Throws DomainError for n == 0.
unsigned long nu2(const Integer& n);

// base^exponent when the result is rational, nullopt otherwise.
// Requires base > 0.
std::optional<Rational> exact_pow(const Rational& base, const Rational& exponent);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace luroth
