// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <mpfr.h>

#include <optional>
#include <string>

#include "luroth/rational.hpp"

namespace luroth {

enum class Round { down, up, nearest };

mpfr_rnd_t to_mpfr(Round r);

// Owning wrapper over mpfr_t. Every operation names its rounding direction.
class Real {
 public:
  static constexpr mpfr_prec_t kDefaultPrecision = 192;

  explicit Real(mpfr_prec_t prec = kDefaultPrecision);
  Real(const Rational& q, Round rnd, mpfr_prec_t prec = kDefaultPrecision);
  Real(const Integer& z, Round rnd, mpfr_prec_t prec = kDefaultPrecision);
  static Real from_double(double v, mpfr_prec_t prec = kDefaultPrecision);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double(Round rnd = Round::nearest) const;
  // Exact: every finite binary float is a dyadic rational.
  Rational to_rational() const;
  // Scientific notation with `digits` significant decimal digits.
  std::string to_string(int digits = 17) const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return b < a; }
  friend bool operator>=(const Real& a, const Real& b) { return b <= a; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend bool operator<(const Real& a, const Rational& b) { return mpfr_cmp_q(a.value_, b.get_mpq_t()) < 0; }
  friend bool operator<=(const Real& a, const Rational& b) { return mpfr_cmp_q(a.value_, b.get_mpq_t()) <= 0; }
  friend bool operator>(const Real& a, const Rational& b) { return mpfr_cmp_q(a.value_, b.get_mpq_t()) > 0; }
  friend bool operator>=(const Real& a, const Rational& b) { return mpfr_cmp_q(a.value_, b.get_mpq_t()) >= 0; }

 private:
  mpfr_t value_;
};

// Results take the larger operand precision.
Real add(const Real& a, const Real& b, Round rnd);
Real sub(const Real& a, const Real& b, Round rnd);
Real mul(const Real& a, const Real& b, Round rnd);
Real div(const Real& a, const Real& b, Round rnd);
Real pow(const Real& base, const Real& exponent, Round rnd);
Real pow(const Real& base, unsigned long exponent, Round rnd);
Real log(const Real& a, Round rnd);
Real exp(const Real& a, Round rnd);
Real neg(const Real& a);
Real abs(const Real& a);
Real pi(Round rnd, mpfr_prec_t prec = Real::kDefaultPrecision);

// lo <= true value <= hi.
struct Enclosure {
  Real lo;
  Real hi;

  static Enclosure exact(const Real& v) { return {v, v}; }
  static Enclosure of(const Rational& q, mpfr_prec_t prec = Real::kDefaultPrecision);

  Real mid() const;
  Real radius() const;  // rounded up
  bool contains(const Rational& q) const { return lo <= q && hi >= q; }
  bool is_point() const { return lo == hi; }
  double to_double() const { return mid().to_double(); }
};

// Interval arithmetic for non-negative enclosures.
Enclosure add(const Enclosure& a, const Enclosure& b);
Enclosure sub(const Enclosure& a, const Enclosure& b);
Enclosure mul_nonneg(const Enclosure& a, const Enclosure& b);
Enclosure pow_nonneg(const Enclosure& base, unsigned long exponent);
// base in (0,1], exponent > 0: larger exponents give smaller results.
Enclosure pow_unit(const Enclosure& base, const Enclosure& exponent);

// Directed enclosures of elementary functions at rational arguments.
Enclosure log_enclosure(const Rational& q, mpfr_prec_t prec = Real::kDefaultPrecision);
// base > 0. Extremes of x^e over the rectangle of rounded inputs sit at corners.
Enclosure pow_enclosure(const Rational& base, const Rational& exponent,
                        mpfr_prec_t prec = Real::kDefaultPrecision);

// Exact rational when one exists, otherwise a certified enclosure.
struct Number {
  std::optional<Rational> exact;
  Enclosure approx;

  static Number of(const Rational& q, mpfr_prec_t prec = Real::kDefaultPrecision);
  static Number of(Enclosure e);

  bool is_exact() const { return exact.has_value(); }
  double to_double() const;
  // "num/den" when exact, otherwise the midpoint with `digits` significant digits.
  std::string to_string(int digits = 17) const;
};

// Sign of a - b, or nullopt when the enclosures overlap.
std::optional<int> compare(const Number& a, const Number& b);

Number pow_number(const Rational& base, const Rational& exponent,
                  mpfr_prec_t prec = Real::kDefaultPrecision);

// Sign of base^exponent - rhs for base, rhs > 0, decided exactly by comparing
// integer powers. Falls back to escalating precision when the powers would be
// enormous; throws ResourceCapExceeded if that cannot separate them.
int compare_pow(const Rational& base, const Rational& exponent, const Rational& rhs);

}  // namespace luroth
