// SPDX-License-Identifier: Apache-2.0

#include "luroth/rational.hpp"

#include <cctype>
#include <string>

#include "luroth/error.hpp"

namespace luroth {

namespace {

// Results larger than this many bits are refused rather than computed.
constexpr unsigned long kMaxPowBits = 1ul << 24;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw ParseError("not a rational number: '" + std::string(whole) + "'");
  std::string text(s.front() == '+' ? s.substr(1) : s);
  return Integer(text, 10);
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) {
      throw ParseError("not a rational number: '" + std::string(text) + "'");
    }
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  auto dot = s.find('.');
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw ParseError("not a rational number: '" + std::string(text) + "'");
  }
  digits.append(int_part);
  digits.append(frac_part);
  exponent -= static_cast<long>(frac_part.size());
  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? make_rational(mantissa, scale) : Rational(mantissa * scale);
}

// Exact integer q-th root, if one exists.
std::optional<Integer> exact_root(const Integer& n, unsigned long q) {
  Integer root;
  if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), q) == 0) return std::nullopt;
  return root;
}

}  // namespace

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), text);
    Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return make_rational(num, den);
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

unsigned long nu2(const Integer& n) {
  if (n == 0) throw DomainError("nu2 is undefined at 0");
  return mpz_scan1(n.get_mpz_t(), 0);
}

std::optional<Rational> exact_pow(const Rational& base, const Rational& exponent) {
  if (sgn(base) <= 0) throw DomainError("exact_pow requires a positive base");
  if (exponent == 0 || base == 1) return Rational(1);
  const Integer& p_signed = exponent.get_num();
  const Integer& q = exponent.get_den();
  if (!q.fits_ulong_p()) return std::nullopt;
  Integer p = abs(p_signed);
  if (!p.fits_ulong_p()) throw ResourceCapExceeded("exponent too large for exact power");
  auto num_root = exact_root(base.get_num(), q.get_ui());
  if (!num_root) return std::nullopt;
  auto den_root = exact_root(base.get_den(), q.get_ui());
  if (!den_root) return std::nullopt;
  unsigned long pu = p.get_ui();
  std::size_t bits = mpz_sizeinbase(num_root->get_mpz_t(), 2) + mpz_sizeinbase(den_root->get_mpz_t(), 2);
  if (bits * pu > kMaxPowBits) throw ResourceCapExceeded("exact power result too large");
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), num_root->get_mpz_t(), pu);
  mpz_pow_ui(den.get_mpz_t(), den_root->get_mpz_t(), pu);
  return sgn(p_signed) > 0 ? make_rational(num, den) : make_rational(den, num);
}

}  // namespace luroth
