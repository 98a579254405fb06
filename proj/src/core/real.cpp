// SPDX-License-Identifier: Apache-2.0

#include "luroth/real.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>

#include "luroth/error.hpp"

namespace luroth {

mpfr_rnd_t to_mpfr(Round r) {
  switch (r) {
    case Round::down:
      return MPFR_RNDD;
    case Round::up:
      return MPFR_RNDU;
    case Round::nearest:
      break;
  }
  return MPFR_RNDN;
}

Real::Real(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

Real::Real(const Rational& q, Round rnd, mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_q(value_, q.get_mpq_t(), to_mpfr(rnd));
}

Real::Real(const Integer& z, Round rnd, mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_z(value_, z.get_mpz_t(), to_mpfr(rnd));
}

Real Real::from_double(double v, mpfr_prec_t prec) {
  Real out(prec);
  mpfr_set_d(out.value_, v, MPFR_RNDN);
  return out;
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

// A moved-from Real is left holding a valid zero of minimal precision.
Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

double Real::to_double(Round rnd) const { return mpfr_get_d(value_, to_mpfr(rnd)); }

Rational Real::to_rational() const {
  if (!mpfr_number_p(value_)) throw DomainError("non-finite value has no rational form");
  if (mpfr_zero_p(value_)) return Rational(0);
  Integer mantissa;
  mpfr_exp_t e = mpfr_get_z_2exp(mantissa.get_mpz_t(), value_);
  Rational r(mantissa);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return r;
}

std::string Real::to_string(int digits) const {
  char* raw = nullptr;
  if (mpfr_asprintf(&raw, "%.*Rg", std::max(digits, 1), value_) < 0) return "nan";
  std::unique_ptr<char, void (*)(char*)> guard(raw, [](char* p) { mpfr_free_str(p); });
  return std::string(raw);
}

namespace {

mpfr_prec_t max_prec(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

Real add(const Real& a, const Real& b, Round rnd) {
  Real out(max_prec(a, b));
  mpfr_add(out.get(), a.get(), b.get(), to_mpfr(rnd));
  return out;
}

Real sub(const Real& a, const Real& b, Round rnd) {
  Real out(max_prec(a, b));
  mpfr_sub(out.get(), a.get(), b.get(), to_mpfr(rnd));
  return out;
}

Real mul(const Real& a, const Real& b, Round rnd) {
  Real out(max_prec(a, b));
  mpfr_mul(out.get(), a.get(), b.get(), to_mpfr(rnd));
  return out;
}

Real div(const Real& a, const Real& b, Round rnd) {
  if (b.is_zero()) throw DomainError("division by zero");
  Real out(max_prec(a, b));
  mpfr_div(out.get(), a.get(), b.get(), to_mpfr(rnd));
  return out;
}

Real pow(const Real& base, const Real& exponent, Round rnd) {
  Real out(max_prec(base, exponent));
  mpfr_pow(out.get(), base.get(), exponent.get(), to_mpfr(rnd));
  return out;
}

Real pow(const Real& base, unsigned long exponent, Round rnd) {
  Real out(base.precision());
  mpfr_pow_ui(out.get(), base.get(), exponent, to_mpfr(rnd));
  return out;
}

Real log(const Real& a, Round rnd) {
  if (a.sign() <= 0) throw DomainError("log of a non-positive number");
  Real out(a.precision());
  mpfr_log(out.get(), a.get(), to_mpfr(rnd));
  return out;
}

Real exp(const Real& a, Round rnd) {
  Real out(a.precision());
  mpfr_exp(out.get(), a.get(), to_mpfr(rnd));
  return out;
}

Real neg(const Real& a) {
  Real out(a.precision());
  mpfr_neg(out.get(), a.get(), MPFR_RNDN);
  return out;
}

Real abs(const Real& a) {
  Real out(a.precision());
  mpfr_abs(out.get(), a.get(), MPFR_RNDN);
  return out;
}

Real pi(Round rnd, mpfr_prec_t prec) {
  Real out(prec);
  mpfr_const_pi(out.get(), to_mpfr(rnd));
  return out;
}

Enclosure Enclosure::of(const Rational& q, mpfr_prec_t prec) {
  return {Real(q, Round::down, prec), Real(q, Round::up, prec)};
}

Real Enclosure::mid() const {
  Real sum = add(lo, hi, Round::nearest);
  mpfr_div_2ui(sum.get(), sum.get(), 1, MPFR_RNDN);
  return sum;
}

Real Enclosure::radius() const {
  Real width = sub(hi, lo, Round::up);
  mpfr_div_2ui(width.get(), width.get(), 1, MPFR_RNDU);
  return width;
}

Enclosure add(const Enclosure& a, const Enclosure& b) {
  return {add(a.lo, b.lo, Round::down), add(a.hi, b.hi, Round::up)};
}

Enclosure sub(const Enclosure& a, const Enclosure& b) {
  return {sub(a.lo, b.hi, Round::down), sub(a.hi, b.lo, Round::up)};
}

Enclosure mul_nonneg(const Enclosure& a, const Enclosure& b) {
  if (a.lo.sign() < 0 || b.lo.sign() < 0) throw DomainError("mul_nonneg needs non-negative enclosures");
  return {mul(a.lo, b.lo, Round::down), mul(a.hi, b.hi, Round::up)};
}

Enclosure pow_nonneg(const Enclosure& base, unsigned long exponent) {
  if (base.lo.sign() < 0) throw DomainError("pow_nonneg needs a non-negative base");
  return {pow(base.lo, exponent, Round::down), pow(base.hi, exponent, Round::up)};
}

Enclosure pow_unit(const Enclosure& base, const Enclosure& exponent) {
  if (base.lo.sign() <= 0 || base.hi > Rational(1) || exponent.lo.sign() <= 0) {
    throw DomainError("pow_unit needs base in (0,1] and a positive exponent");
  }
  return {pow(base.lo, exponent.hi, Round::down), pow(base.hi, exponent.lo, Round::up)};
}

Enclosure log_enclosure(const Rational& q, mpfr_prec_t prec) {
  if (sgn(q) <= 0) throw DomainError("log of a non-positive number");
  Enclosure x = Enclosure::of(q, prec);
  return {log(x.lo, Round::down), log(x.hi, Round::up)};
}

Enclosure pow_enclosure(const Rational& base, const Rational& exponent, mpfr_prec_t prec) {
  if (sgn(base) <= 0) throw DomainError("pow needs a positive base");
  Enclosure b = Enclosure::of(base, prec);
  Enclosure e = Enclosure::of(exponent, prec);
  Real lo = pow(b.lo, e.lo, Round::down);
  Real hi = pow(b.lo, e.lo, Round::up);
  for (const Real* bb : {&b.lo, &b.hi}) {
    for (const Real* ee : {&e.lo, &e.hi}) {
      Real down = pow(*bb, *ee, Round::down);
      Real up = pow(*bb, *ee, Round::up);
      if (down < lo) lo = down;
      if (up > hi) hi = up;
    }
  }
  return {lo, hi};
}

Number Number::of(const Rational& q, mpfr_prec_t prec) { return {q, Enclosure::of(q, prec)}; }

Number Number::of(Enclosure e) { return {std::nullopt, std::move(e)}; }

double Number::to_double() const { return exact ? exact->get_d() : approx.to_double(); }

std::string Number::to_string(int digits) const {
  return exact ? format_rational(*exact) : approx.mid().to_string(digits);
}

std::optional<int> compare(const Number& a, const Number& b) {
  if (a.exact && b.exact) return cmp(*a.exact, *b.exact) < 0 ? -1 : (*a.exact == *b.exact ? 0 : 1);
  if (a.approx.hi < b.approx.lo) return -1;
  if (a.approx.lo > b.approx.hi) return 1;
  return std::nullopt;
}

Number pow_number(const Rational& base, const Rational& exponent, mpfr_prec_t prec) {
  if (auto e = exact_pow(base, exponent)) return Number::of(*e, prec);
  return Number::of(pow_enclosure(base, exponent, prec));
}

namespace {

constexpr std::size_t kMaxExactCompareBits = 1u << 22;

Rational rational_pow(const Rational& base, unsigned long k) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), k);
  return make_rational(num, den);
}

std::size_t bit_size(const Rational& q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

}  // namespace

int compare_pow(const Rational& base, const Rational& exponent, const Rational& rhs) {
  if (sgn(base) <= 0 || sgn(rhs) <= 0) throw DomainError("compare_pow needs positive operands");
  Integer p = abs(exponent.get_num());
  const Integer& q = exponent.get_den();
  Rational b = sgn(exponent) < 0 ? Rational(1 / base) : base;
  if (p.fits_ulong_p() && q.fits_ulong_p() && p.get_ui() * bit_size(b) <= kMaxExactCompareBits &&
      q.get_ui() * bit_size(rhs) <= kMaxExactCompareBits) {
    return cmp(rational_pow(b, p.get_ui()), rational_pow(rhs, q.get_ui()));
  }
  for (mpfr_prec_t prec = 256; prec <= (1 << 16); prec *= 4) {
    Number lhs = Number::of(pow_enclosure(base, exponent, prec));
    if (auto c = compare(lhs, Number::of(rhs, prec))) return *c;
  }
  throw ResourceCapExceeded("could not separate a power from a rational");
}

}  // namespace luroth
