// SPDX-License-Identifier: Apache-2.0

#include "luroth/estimators/digit_series.hpp"

#include <algorithm>

#include "luroth/error.hpp"
#include "luroth/limsup/enumerate.hpp"

namespace luroth {

namespace {

// Head terms d < kSplit are summed directly; kCorrections Euler-Maclaurin
// terms handle the rest. The remainder is below 1e-60 for moderate a.
constexpr unsigned long kSplit = 40;
constexpr std::size_t kCorrections = 30;
constexpr mpfr_prec_t kGuardBits = 32;
// The integral expansion for the pair kind needs a well below 2(kSplit-1/2)^2.
const Rational kMaxExponent(1000);

const std::vector<Rational>& bernoulli() {
  static const std::vector<Rational> table = [] {
    std::size_t m_max = 2 * kCorrections + 2;
    std::vector<Rational> b(m_max + 1);
    b[0] = 1;
    for (std::size_t m = 1; m <= m_max; ++m) {
      Rational acc = 0;
      Integer binom = 1;  // C(m+1, k)
      for (std::size_t k = 0; k < m; ++k) {
        acc += Rational(binom) * b[k];
        binom = binom * Integer(static_cast<unsigned long>(m + 1 - k)) / Integer(static_cast<unsigned long>(k + 1));
      }
      b[m] = -acc / Rational(static_cast<unsigned long>(m + 1));
    }
    return b;
  }();
  return table;
}

Real real_ui(unsigned long v, mpfr_prec_t prec) {
  Real out(prec);
  mpfr_set_ui(out.get(), v, MPFR_RNDN);
  return out;
}

// Series value at an exactly representable a, with a rigorous radius.
Enclosure evaluate_at(const Real& a, DigitSeriesKind kind, mpfr_prec_t prec) {
  const mpfr_prec_t wp = std::max(prec, a.precision()) + kGuardBits;
  const bool pair = kind == DigitSeriesKind::pair;
  Real aw(wp);
  mpfr_set(aw.get(), a.get(), MPFR_RNDN);
  Real neg_a = neg(aw);

  Real head(wp);
  for (unsigned long d = 2; d < kSplit; ++d) {
    Real base = real_ui(pair ? d * (d - 1) : d, wp);
    head = add(head, exp(mul(neg_a, log(base, Round::nearest), Round::nearest), Round::nearest), Round::nearest);
  }

  // Taylor coefficients at N of phi = -a log(x) [- a log(x-1)], then of f = exp(phi).
  const std::size_t order = 2 * kCorrections + 1;
  const unsigned long N = kSplit;
  std::vector<Real> phi(order + 1, Real(wp));
  Real inv_n = div(real_ui(1, wp), real_ui(N, wp), Round::nearest);
  Real inv_n1 = div(real_ui(1, wp), real_ui(N - 1, wp), Round::nearest);
  phi[0] = mul(neg_a, log(real_ui(N, wp), Round::nearest), Round::nearest);
  if (pair) phi[0] = add(phi[0], mul(neg_a, log(real_ui(N - 1, wp), Round::nearest), Round::nearest), Round::nearest);
  Real pow_n = real_ui(1, wp), pow_n1 = real_ui(1, wp);
  for (std::size_t j = 1; j <= order; ++j) {
    pow_n = mul(pow_n, inv_n, Round::nearest);
    pow_n1 = mul(pow_n1, inv_n1, Round::nearest);
    Real c = pair ? add(pow_n, pow_n1, Round::nearest) : pow_n;
    mpfr_div_ui(c.get(), c.get(), j, MPFR_RNDN);
    // log(N + t) has coefficient (-1)^(j+1) / (j N^j).
    phi[j] = mul(neg_a, c, Round::nearest);
    if (j % 2 == 0) phi[j] = neg(phi[j]);
  }
  std::vector<Real> f(order + 1, Real(wp));
  f[0] = exp(phi[0], Round::nearest);
  for (std::size_t m = 1; m <= order; ++m) {
    Real acc(wp);
    for (std::size_t k = 1; k <= m; ++k) {
      Real term = mul(phi[k], f[m - k], Round::nearest);
      mpfr_mul_ui(term.get(), term.get(), k, MPFR_RNDN);
      acc = add(acc, term, Round::nearest);
    }
    mpfr_div_ui(acc.get(), acc.get(), m, MPFR_RNDN);
    f[m] = acc;
  }

  // Integral of f over [N, inf).
  Real integral(wp);
  Real integral_tail(wp);
  if (!pair) {
    Real am1 = sub(aw, real_ui(1, wp), Round::nearest);
    integral = div(exp(mul(neg(am1), log(real_ui(N, wp), Round::nearest), Round::nearest), Round::nearest), am1,
                   Round::nearest);
  } else {
    // (x(x-1))^-a = sum_k C(a+k-1, k) 4^-k u^(-2a-2k) with u = x - 1/2.
    Real u = sub(real_ui(N, wp), Real(Rational(1, 2), Round::nearest, wp), Round::nearest);
    Real u2 = mul(u, u, Round::nearest);
    Real two_a = add(aw, aw, Round::nearest);
    Real coeff = real_ui(1, wp);
    Real upow = exp(mul(sub(real_ui(1, wp), two_a, Round::nearest), log(u, Round::nearest), Round::nearest),
                    Round::nearest);  // u^(1-2a)
    Real ratio_bound = div(std::max(aw, real_ui(1, wp)), mul(real_ui(4, wp), u2, Round::down), Round::up);
    Real term(wp);
    for (unsigned long k = 0;; ++k) {
      Real denom = add(two_a, real_ui(2 * k, wp), Round::nearest);
      denom = sub(denom, real_ui(1, wp), Round::nearest);
      term = div(mul(coeff, upow, Round::nearest), denom, Round::nearest);
      integral = add(integral, term, Round::nearest);
      Real threshold = abs(integral);
      mpfr_div_2ui(threshold.get(), threshold.get(), static_cast<unsigned long>(wp), MPFR_RNDN);
      if (term <= threshold || k > 400) break;
      // coeff *= (a + k) / ((k + 1) 4)
      coeff = mul(coeff, add(aw, real_ui(k, wp), Round::nearest), Round::nearest);
      mpfr_div_ui(coeff.get(), coeff.get(), 4 * (k + 1), MPFR_RNDN);
      upow = div(upow, u2, Round::nearest);
    }
    // Remaining terms shrink at least geometrically with ratio_bound < 1/2.
    integral_tail = div(mul(term, ratio_bound, Round::up), sub(real_ui(1, wp), ratio_bound, Round::down), Round::up);
  }

  Real half_f0 = f[0];
  mpfr_div_2ui(half_f0.get(), half_f0.get(), 1, MPFR_RNDN);
  Real tail = add(integral, half_f0, Round::nearest);
  const auto& b = bernoulli();
  // f^(2k-1)(N) B_2k / (2k)! = B_2k / (2k) * f[2k-1] in Taylor-coefficient form.
  for (std::size_t k = 1; k <= kCorrections; ++k) {
    Real bk(b[2 * k] / Rational(static_cast<unsigned long>(2 * k)), Round::nearest, wp);
    tail = sub(tail, mul(bk, f[2 * k - 1], Round::nearest), Round::nearest);
  }
  Real remainder(b[2 * kCorrections + 2] / Rational(static_cast<unsigned long>(2 * kCorrections + 2)), Round::up, wp);
  remainder = mul(abs(remainder), abs(f[2 * kCorrections + 1]), Round::up);

  Real total = add(head, tail, Round::nearest);
  // Rounding slack: a few thousand operations at working precision.
  Real slack = add(real_ui(1, wp), abs(total), Round::up);
  slack = add(slack, abs(integral), Round::up);
  mpfr_div_2ui(slack.get(), slack.get(), static_cast<unsigned long>(wp - 20), MPFR_RNDU);
  Real radius = add(add(remainder, integral_tail, Round::up), slack, Round::up);

  Enclosure out{Real(prec), Real(prec)};
  mpfr_sub(out.lo.get(), total.get(), radius.get(), MPFR_RNDD);
  mpfr_add(out.hi.get(), total.get(), radius.get(), MPFR_RNDU);
  return out;
}

void require_convergent(const Real& a_lo, DigitSeriesKind kind) {
  if (kind == DigitSeriesKind::pair && a_lo <= Rational(1, 2)) {
    throw DivergentParameter("pair digit series diverges for a <= 1/2 (a = " + a_lo.to_string(10) + ")");
  }
  if (kind == DigitSeriesKind::single && a_lo <= Rational(1)) {
    throw DivergentParameter("single digit series diverges for a <= 1 (a = " + a_lo.to_string(10) + ")");
  }
}

}  // namespace

Enclosure digit_series(const Enclosure& a, DigitSeriesKind kind, mpfr_prec_t prec) {
  require_convergent(a.lo, kind);
  if (a.hi > kMaxExponent) throw DomainError("digit series exponent above 1000 is not supported");
  Enclosure at_hi = evaluate_at(a.hi, kind, prec);
  if (a.is_point()) return at_hi;
  Enclosure at_lo = evaluate_at(a.lo, kind, prec);
  return {at_hi.lo, at_lo.hi};
}

Enclosure digit_series(const Rational& a, DigitSeriesKind kind, mpfr_prec_t prec) {
  if (kind == DigitSeriesKind::pair && a == 1) return Enclosure::of(Rational(1), prec);  // telescopes
  return digit_series(Enclosure::of(a, prec + kGuardBits), kind, prec);
}

PressureRoot pressure_root(const Rational& tau, mpfr_prec_t prec) {
  if (sgn(tau) < 0) throw DomainError("pressure root needs tau >= 0");
  const mpfr_prec_t wp = prec + kGuardBits;
  // g(s) = r((1+tau)s) - 1 as an enclosure; the exponent is rounded both ways.
  auto g = [&](const Real& s) {
    Enclosure a{mul(s, Real(Rational(1 + tau), Round::down, wp), Round::down),
                mul(s, Real(Rational(1 + tau), Round::up, wp), Round::up)};
    Enclosure r = digit_series(a, DigitSeriesKind::pair, wp);
    Enclosure one = Enclosure::of(Rational(1), wp);
    return sub(r, one);
  };
  auto mid = [](const Enclosure& e) { return e.mid(); };

  // Bracket: just inside the convergence range r > 1, and s = 1 where r <= 1.
  Real lo(Rational(Rational(9, 16) / (1 + tau)), Round::up, wp);
  Real hi(Rational(1), Round::nearest, wp);
  Enclosure g_hi = g(hi);
  PressureRoot out{tau, hi, Real(wp), 0};
  if (g_hi.lo.sign() <= 0 && g_hi.hi.sign() >= 0) {
    out.residual = std::max(abs(g_hi.lo), abs(g_hi.hi));
    return out;
  }
  Real f_lo = mid(g(lo));
  Real f_hi = mid(g_hi);
  if (f_lo.sign() <= 0 || f_hi.sign() >= 0) throw DomainError("pressure equation has no sign change on the bracket");
  Real tolerance(wp);
  mpfr_set_ui_2exp(tolerance.get(), 1, -static_cast<mpfr_exp_t>(prec - 8), MPFR_RNDN);
  int side = 0;
  std::size_t it = 0;
  Real s = lo;
  Enclosure g_s = g(s);
  for (; it < 400 && sub(hi, lo, Round::up) > tolerance; ++it) {
    // Illinois step: false position, halving the stale end's value.
    Real num = mul(f_hi, sub(hi, lo, Round::nearest), Round::nearest);
    s = sub(hi, div(num, sub(f_hi, f_lo, Round::nearest), Round::nearest), Round::nearest);
    if (!(s > lo && s < hi)) {
      s = add(lo, hi, Round::nearest);
      mpfr_div_2ui(s.get(), s.get(), 1, MPFR_RNDN);
    }
    g_s = g(s);
    if (g_s.lo.sign() <= 0 && g_s.hi.sign() >= 0) break;
    Real f_s = mid(g_s);
    if (f_s.sign() > 0) {
      lo = s;
      f_lo = f_s;
      if (side == -1) mpfr_div_2ui(f_hi.get(), f_hi.get(), 1, MPFR_RNDN);
      side = -1;
    } else {
      hi = s;
      f_hi = f_s;
      if (side == 1) mpfr_div_2ui(f_lo.get(), f_lo.get(), 1, MPFR_RNDN);
      side = 1;
    }
  }
  out.s_star = s;
  out.residual = std::max(abs(g_s.lo), abs(g_s.hi));
  out.iterations = it + 1;
  return out;
}

CoverSum cover_sum(const Rational& tau, unsigned long j, const Rational& s, std::size_t n) {
  if (sgn(tau) < 0) throw DomainError("cover sum needs tau >= 0");
  if (n == 0) throw DomainError("cover sum depth must be positive");
  Rational a = (1 + tau + Rational(j)) * s;
  if (a <= 1) {
    throw DivergentParameter("cover sum needs s > 1/(1+tau+j); got exponent " + format_rational(a));
  }
  CoverSum out{tau, s, j, n, a, digit_series(a, DigitSeriesKind::pair), digit_series(a, DigitSeriesKind::single),
               Enclosure{Real(), Real()}};
  out.value = mul_nonneg(pow_nonneg(out.r, n - 1), out.C);
  return out;
}

ExplicitCoverSum explicit_cover_sum(const Rational& tau, unsigned long j, const Rational& s, std::size_t n,
                                    const Integer& q_cap) {
  Rational a = (1 + tau + Rational(j)) * s;
  if (a <= 1) throw DivergentParameter("explicit cover sum needs exponent > 1");
  if (n == 0) throw DomainError("cover sum depth must be positive");
  ExplicitCoverSum out{Enclosure::of(Rational(0)), Real(), Enclosure::of(Rational(0)), 0};
  Real lo, hi;
  Real a_lo(a, Round::down), a_hi(a, Round::up);
  Real neg_lo = neg(a_hi), neg_hi = neg(a_lo);
  for_each_tuple(q_cap, n, [&](const STriple& t) {
    if (t.depth < n) {
      Integer reach = t.Q * (t.d_last - 1);
      mpz_mul_2exp(reach.get_mpz_t(), reach.get_mpz_t(), n - t.depth);
      return reach <= q_cap;
    }
    ++out.tuples;
    // Q >= 2, so Q^-a is decreasing in a.
    lo = add(lo, pow(Real(t.Q, Round::down), neg_lo, Round::down), Round::down);
    hi = add(hi, pow(Real(t.Q, Round::up), neg_hi, Round::up), Round::up);
    return false;
  });
  out.partial = {lo, hi};
  // Sum over Q > q_cap of Q^-a <= q_cap^-(a - b) * sum of Q^-b, b = (1 + a)/2.
  Rational b = (1 + a) / 2;
  CoverSum at_b = cover_sum(Rational(0), 0, b, n);
  Enclosure factor = pow_enclosure(Rational(q_cap), -(a - b));
  out.tail_bound = mul(factor.hi, at_b.value.hi, Round::up);
  out.total = {lo, add(hi, out.tail_bound, Round::up)};
  return out;
}

std::vector<DecayRow> dimension_decay(const Rational& tau, const std::vector<unsigned long>& j_list,
                                      const Rational& s_margin, const Rational& threshold) {
  if (sgn(s_margin) <= 0) throw DomainError("s margin must be positive");
  if (sgn(threshold) <= 0) throw DomainError("threshold must be positive");
  std::vector<DecayRow> rows;
  for (unsigned long j : j_list) {
    Rational bound = 1 / (1 + tau + Rational(j));
    Rational s = bound + s_margin;
    CoverSum first = cover_sum(tau, j, s, 1);
    // value(n) = r^(n-1) C; step until the upper end is below the threshold.
    Enclosure value = first.value;
    std::size_t n = 1;
    for (; !(value.hi < threshold); ++n) {
      if (n > 100000) throw ResourceCapExceeded("cover sum did not decay within 100000 levels");
      value = mul_nonneg(value, first.r);
    }
    rows.push_back({j, s, bound, cover_sum(tau, j, s, n), n});
  }
  return rows;
}

}  // namespace luroth
