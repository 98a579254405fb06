// SPDX-License-Identifier: Apache-2.0

#include "luroth/psi/orders.hpp"

#include "luroth/error.hpp"
#include "luroth/limsup/enumerate.hpp"

namespace luroth {

namespace {

// Scans use a modest precision; only the extremes matter.
constexpr mpfr_prec_t kScanPrecision = 96;
constexpr std::size_t kMaxExactPowBits = 1u << 20;

struct Extremes {
  std::optional<Number> lower, upper;
  Integer arg_lower, arg_upper;
  std::size_t points = 0;

  static bool less(const Number& a, const Number& b) {
    if (auto c = compare(a, b)) return *c < 0;
    return a.approx.mid() < b.approx.mid();
  }

  void add(const Number& v, const Integer& q) {
    ++points;
    if (!lower || less(v, *lower)) {
      lower = v;
      arg_lower = q;
    }
    if (!upper || less(*upper, v)) {
      upper = v;
      arg_upper = q;
    }
  }
};

OrderEstimate finish(Extremes&& e, const Integer& q_min, const Integer& q_max, std::optional<std::size_t> k) {
  if (!e.lower) throw DomainError("order estimate over an empty window");
  return {std::move(*e.lower), std::move(*e.upper), e.arg_lower, e.arg_upper, q_min, q_max, k, e.points};
}

}  // namespace

Number order_ratio(const PsiSpec& spec, const Integer& q, mpfr_prec_t prec) {
  if (q < 2) throw DomainError("order ratio needs q >= 2");
  if (auto* f = std::get_if<PsiPower>(&spec.family)) return Number::of(f->tau, prec);
  if (auto* f = std::get_if<PsiTwoAdic>(&spec.family)) return Number::of(f->tau + Rational(nu2(q)), prec);
  Number psi = psi_eval(spec, q, prec);
  if (psi.exact && *psi.exact == 1) return Number::of(Rational(0), prec);
  Enclosure log_q = log_enclosure(Rational(q), prec);
  Enclosure log_psi_lo = {log(psi.approx.lo, Round::down), log(psi.approx.hi, Round::up)};
  Real neg_hi = neg(log_psi_lo.lo);  // -log psi is largest at the smallest psi
  Real neg_lo = neg(log_psi_lo.hi);
  if (neg_lo.sign() < 0) neg_lo = Real(prec);
  return Number::of(Enclosure{div(neg_lo, log_q.hi, Round::down), div(neg_hi, log_q.lo, Round::up)});
}

std::vector<Integer> monotonicity_violations(const PsiSpec& spec, const Integer& q_max) {
  if (q_max < 2) throw DomainError("monotonicity scan needs q_max >= 2");
  std::vector<Integer> out;
  if (std::holds_alternative<PsiPower>(spec.family) || std::holds_alternative<PsiConstant>(spec.family)) {
    return out;  // non-increasing by construction
  }
  Number prev = psi_eval(spec, Integer(1), kScanPrecision);
  for (Integer q = 1; q < q_max; ++q) {
    Integer next_q = q + 1;
    Number next = psi_eval(spec, next_q, kScanPrecision);
    std::optional<int> c = compare(next, prev);
    for (mpfr_prec_t prec = 4 * kScanPrecision; !c && prec <= (1 << 14); prec *= 4) {
      c = compare(psi_eval(spec, next_q, prec), psi_eval(spec, q, prec));
    }
    if (c && *c > 0) out.push_back(q);
    prev = std::move(next);
  }
  return out;
}

OrderEstimate order_estimate(const PsiSpec& spec, const Integer& q_min, const Integer& q_max) {
  if (q_min < 2 || q_min >= q_max) throw DomainError("order estimate needs 2 <= q_min < q_max");
  Extremes e;
  for (Integer q = q_min; q <= q_max; ++q) e.add(order_ratio(spec, q, kScanPrecision), q);
  return finish(std::move(e), q_min, q_max, std::nullopt);
}

OrderEstimate lambda_order_estimate(const PsiSpec& spec, std::size_t k, const Integer& q_max) {
  std::vector<STriple> members = enumerate_S_k(k, q_max);
  Extremes e;
  const Integer* last = nullptr;
  for (const auto& t : members) {
    if (last && *last == t.Q) continue;
    last = &t.Q;
    e.add(order_ratio(spec, t.Q, kScanPrecision), t.Q);
  }
  Integer q_min;
  mpz_ui_pow_ui(q_min.get_mpz_t(), 2, k);
  return finish(std::move(e), q_min, q_max, k);
}

Theta::Theta(PsiSpec psi, Rational s) : psi_(std::move(psi)), s_(std::move(s)) {
  if (sgn(s_) <= 0 || s_ > 1) throw DomainError("theta needs 0 < s <= 1");
}

Number Theta::operator()(const Integer& q) const {
  if (q < 1) throw DomainError("theta is defined for q >= 1");
  Rational qr(q);
  // Pure powers of q: theta = q^(1 - s(1 + tau + nu)).
  if (auto* f = std::get_if<PsiPower>(&psi_.family)) return pow_number(qr, 1 - s_ * (1 + f->tau));
  if (auto* f = std::get_if<PsiTwoAdic>(&psi_.family)) {
    return pow_number(qr, 1 - s_ * (1 + f->tau + Rational(nu2(q))));
  }
  Number psi = psi_eval(psi_, q);
  if (psi.exact) {
    // With s = a/b: theta^b = q^(b-a) psi^a, a rational; take its b-th root.
    const Integer& a = s_.get_num();
    const Integer& b = s_.get_den();
    std::size_t bits = mpz_sizeinbase(q.get_mpz_t(), 2) + mpz_sizeinbase(psi.exact->get_num_mpz_t(), 2) +
                       mpz_sizeinbase(psi.exact->get_den_mpz_t(), 2);
    if (b.fits_ulong_p() && b.get_ui() * bits <= kMaxExactPowBits) {
      Integer qa, num, den;
      mpz_pow_ui(qa.get_mpz_t(), q.get_mpz_t(), Integer(b - a).get_ui());
      mpz_pow_ui(num.get_mpz_t(), psi.exact->get_num_mpz_t(), a.get_ui());
      mpz_pow_ui(den.get_mpz_t(), psi.exact->get_den_mpz_t(), a.get_ui());
      return pow_number(make_rational(qa * num, den), make_rational(1, b));
    }
    return Number::of(mul_nonneg(pow_enclosure(qr, 1 - s_), pow_enclosure(*psi.exact, s_)));
  }
  Enclosure psi_s = {pow(psi.approx.lo, Real(s_, Round::up), Round::down),
                     pow(psi.approx.hi, Real(s_, Round::down), Round::up)};
  return Number::of(mul_nonneg(pow_enclosure(qr, 1 - s_), psi_s));
}

Theta theta(const PsiSpec& spec, const Rational& s) { return Theta(spec, s); }

}  // namespace luroth
