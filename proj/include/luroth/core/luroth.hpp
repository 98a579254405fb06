// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "luroth/rational.hpp"

namespace luroth {

using Digit = Integer;
using DigitList = std::vector<Digit>;

// Finite prefix plus an optional repeating tail. With a period it denotes one
// point of (0,1]; without one it is just a prefix.
struct DigitSeq {
  DigitList prefix;
  std::optional<DigitList> period;

  friend bool operator==(const DigitSeq&, const DigitSeq&) = default;
};

// "[d1,d2,...;p1,p2,...]", the ";..." part omitted when there is no period.
std::string format_digits(const DigitSeq& seq);
DigitSeq parse_digits(std::string_view text);

// Convergent data with Q kept unsimplified.
struct ConvergentTriple {
  Integer P;
  Integer Q;
  Digit d_last;
  std::size_t depth = 0;

  Rational value() const { return make_rational(P, Q); }
  friend bool operator==(const ConvergentTriple&, const ConvergentTriple&) = default;
};

// The half-open interval (left, left + length].
struct Cylinder {
  DigitList digits;
  Rational left;
  Rational length;

  Rational right() const { return left + length; }
  bool contains(const Rational& x) const { return x > left && x <= right(); }
};

struct DigitBounds {
  Rational value;        // |x Q_n - P_n|
  Rational lower;        // 1/((d_n - 1) d_{n+1})
  Rational upper;        // 1/((d_n - 1)(d_{n+1} - 1))
  Rational loose_lower;  // 1/(d_n d_{n+1})
  Rational loose_upper;  // 4/(d_n d_{n+1})
  bool lower_strict = false;
  bool upper_strict = false;
  bool upper_weak = false;
  bool loose_lower_strict = false;
  bool loose_lower_weak = false;
  bool loose_upper_strict = false;
  bool loose_upper_weak = false;
};

constexpr std::size_t kDefaultOrbitCap = 10000;

// Throws DomainError unless 0 < x <= 1.
void require_unit_interval(const Rational& x);
void require_digits(std::span<const Digit> digits);

Rational luroth_map(const Rational& x);
Digit first_digit(const Rational& x);

// First n digits. If the orbit revisits a point within `orbit_cap` steps the
// period is reported; the prefix is then extended to cover the whole
// pre-period so the result still denotes x.
DigitSeq digits(const Rational& x, std::size_t n, std::size_t orbit_cap = kDefaultOrbitCap);

// First n digits without cycle detection.
DigitList digit_prefix(const Rational& x, std::size_t n);

ConvergentTriple convergent(std::span<const Digit> digits);
// Convergents of depths 1..digits.size().
std::vector<ConvergentTriple> convergents(std::span<const Digit> digits);

Rational evaluate(const DigitSeq& seq);
// Value of a finite prefix, i.e. the left end of its cylinder.
Rational evaluate_prefix(std::span<const Digit> digits);

Cylinder cylinder(std::span<const Digit> digits);

// x - P_n(x)/Q_n(x).
Rational approximation_error(const Rational& x, std::size_t n);

DigitBounds digit_bounds_check(const Rational& x, std::size_t n);

}  // namespace luroth
