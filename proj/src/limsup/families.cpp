// SPDX-License-Identifier: Apache-2.0

#include "luroth/limsup/families.hpp"

#include <algorithm>
#include <cstdint>

#include "luroth/error.hpp"

namespace luroth {

namespace {

void require_exponent(const Rational& s) {
  if (sgn(s) <= 0 || s > 1) throw DomainError("blow-up exponent must lie in (0,1], got " + format_rational(s));
}

IntervalBracket rate_interval_at(const Rational& left, const Integer& Q, const Digit& d, const PsiSpec& rate) {
  Rational cyl = make_rational(1, (d - 1) * Q);
  RatedInterval cylinder_tail = RatedInterval::half_open(left, left + cyl);
  int c = compare_with_psi(rate, Q, make_rational(1, d - 1));
  if (c < 0) return IntervalBracket::of(cylinder_tail);
  if (c == 0) return IntervalBracket::of(RatedInterval::open(left, left + cyl));
  Number psi = psi_eval(rate, Q);
  if (psi.exact) return IntervalBracket::of(RatedInterval::open(left, left + *psi.exact / Rational(Q)));
  RatedInterval inner = RatedInterval::open(left, left + psi.approx.lo.to_rational() / Rational(Q));
  RatedInterval outer = RatedInterval::open(left, left + psi.approx.hi.to_rational() / Rational(Q));
  return {intersect(inner, cylinder_tail), intersect(outer, cylinder_tail)};
}

// Sign of rho + rho^s - target, where rho is half the length of the rate-tau
// interval attached to (Q, d).
int reach_sign(const Integer& Q, const Digit& d, const Rational& tau, const Rational& s, const Rational& target) {
  std::optional<Rational> ell;
  if (compare_pow(Rational(Q), -tau, make_rational(1, d - 1)) >= 0) {
    ell = make_rational(1, (d - 1) * Q);
  } else {
    ell = exact_pow(Rational(Q), Rational(-1 - tau));
  }
  if (ell) {
    Rational rho = *ell / 2;
    Rational rest = target - rho;
    if (sgn(rest) <= 0) return 1;
    return compare_pow(rho, s, rest);
  }
  // rho = Q^(-1-tau)/2 is irrational here, so equality cannot occur.
  for (mpfr_prec_t prec = Real::kDefaultPrecision; prec <= (1 << 16); prec *= 4) {
    Enclosure half = Enclosure::of(Rational(1, 2), prec);
    Enclosure rho = mul_nonneg(pow_enclosure(Rational(Q), Rational(-1 - tau), prec), half);
    Enclosure rho_s = mul_nonneg(pow_enclosure(Rational(2), Rational(-s), prec),
                                 pow_enclosure(Rational(Q), Rational(-(1 + tau) * s), prec));
    if (auto c = compare(Number::of(add(rho, rho_s)), Number::of(target, prec))) return *c;
  }
  throw ResourceCapExceeded("could not decide a blow-up inclusion at Q=" + Q.get_str());
}

// Fixed-point grid for the coverage sweep: 2^-kFixedBits resolution.
constexpr unsigned kFixedBits = 120;
using Fixed = unsigned __int128;
const Fixed kFixedOne = Fixed(1) << kFixedBits;

Fixed from_mpz(const Integer& z) {
  if (sgn(z) <= 0) return 0;
  Integer capped = z > Integer(1) << 121 ? Integer(Integer(1) << 121) : z;
  Fixed lo = mpz_getlimbn(capped.get_mpz_t(), 0);
  Fixed hi = mpz_size(capped.get_mpz_t()) > 1 ? Fixed(mpz_getlimbn(capped.get_mpz_t(), 1)) : 0;
  static_assert(sizeof(mp_limb_t) == 8, "64-bit limbs expected");
  return std::min(kFixedOne, lo | (hi << 64));
}

Fixed to_fixed(const Rational& x, bool up) {
  Rational scaled = x;
  mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), kFixedBits);
  return from_mpz(up ? ceil(scaled) : floor(scaled));
}

Fixed to_fixed(const Real& x, bool up) {
  Real scaled(x.precision());
  mpfr_mul_2ui(scaled.get(), x.get(), kFixedBits, MPFR_RNDN);
  Integer z;
  mpfr_get_z(z.get_mpz_t(), scaled.get(), up ? MPFR_RNDU : MPFR_RNDD);
  return from_mpz(z);
}

Rational from_fixed(Fixed f) {
  Integer hi = static_cast<unsigned long>(f >> 64);
  Integer lo = static_cast<unsigned long>(f & ~std::uint64_t{0});
  Rational r(Integer(hi << 64) + lo);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), kFixedBits);
  return r;
}

Rational fixed_union(std::vector<std::pair<Fixed, Fixed>>& parts) {
  std::sort(parts.begin(), parts.end());
  Fixed total = 0;
  Fixed run_lo = 0, run_hi = 0;
  bool open = false;
  for (const auto& [lo, hi] : parts) {
    if (lo >= hi) continue;
    if (open && lo <= run_hi) {
      run_hi = std::max(run_hi, hi);
      continue;
    }
    if (open) total += run_hi - run_lo;
    run_lo = lo;
    run_hi = hi;
    open = true;
  }
  if (open) total += run_hi - run_lo;
  return from_fixed(total);
}

struct CoverageWalk {
  const Rational& tau;
  const Rational& s;
  std::size_t depth;
  const Integer& q_max;
  std::size_t cap;
  PsiSpec rate;
  bool tails_certified;
  Real delta;  // upper bound for the blow-up radius of any tail triple
  std::vector<std::pair<Fixed, Fixed>> inner, outer;
  Rational certified_mass = 0;
  std::size_t intervals = 0;
  std::size_t tail_regions = 0;

  void count() {
    if (++intervals > cap) throw ResourceCapExceeded("coverage family exceeds the cap of " + std::to_string(cap));
  }

  void leaf(const Rational& left, const Integer& Q, const Digit& d) {
    count();
    IntervalBracket blown = blow_up(rate_interval_at(left, Q, d, rate), s);
    inner.emplace_back(to_fixed(blown.inner.left, true), to_fixed(blown.inner.right, false));
    outer.emplace_back(to_fixed(blown.outer.left, false), to_fixed(blown.outer.right, true));
    Rational cyl = make_rational(1, (d - 1) * Q);
    if (reach_sign(Q, d, tau, s, cyl) >= 0) certified_mass += cyl;
  }

  void tail(const Rational& a, const Rational& length) {
    count();
    ++tail_regions;
    if (tails_certified) {
      inner.emplace_back(to_fixed(a, true), to_fixed(a + length, false));
      certified_mass += length;
    }
    Real lo = sub(Real(a, Round::down), delta, Round::down);
    Real hi = add(Real(Rational(a + length), Round::up), delta, Round::up);
    outer.emplace_back(to_fixed(lo, false), to_fixed(hi, true));
  }

  // Node of depth k: cylinder (a, a + 1/W].
  void node(std::size_t k, const Rational& a, const Integer& W) {
    Rational L = make_rational(1, W);
    for (Digit d = 2;; ++d) {
      Rational child_left = a + L / Rational(d);
      if (k + 1 == depth) {
        Integer Q = W * d;
        if (Q > q_max) {
          tail(a, L / Rational(d - 1));
          return;
        }
        leaf(child_left, Q, d);
      } else {
        Integer child_W = W * d * (d - 1);
        Integer min_q = child_W;
        mpz_mul_2exp(min_q.get_mpz_t(), min_q.get_mpz_t(), depth - k - 1);
        if (min_q > q_max) {
          tail(a, L / Rational(d - 1));
          return;
        }
        node(k + 1, child_left, child_W);
      }
    }
  }
};

}  // namespace

IntervalBracket rate_interval(const ConvergentTriple& t, const PsiSpec& rate) {
  require_digits(std::span<const Digit>(&t.d_last, 1));
  return rate_interval_at(t.value(), t.Q, t.d_last, rate);
}

IntervalBracket blow_up(const RatedInterval& i, const Rational& s) {
  require_exponent(s);
  if (i.empty() || i.left == i.right) throw DomainError("cannot blow up an interval of zero length");
  Rational rho = (i.right - i.left) / 2;
  Rational centre = (i.left + i.right) / 2;
  Number r = pow_number(rho, s);
  if (r.exact) return IntervalBracket::of({centre - *r.exact, centre + *r.exact, i.left_open, i.right_open});
  Rational lo = r.approx.lo.to_rational();
  Rational hi = r.approx.hi.to_rational();
  return {{centre - lo, centre + lo, i.left_open, i.right_open}, {centre - hi, centre + hi, i.left_open, i.right_open}};
}

IntervalBracket blow_up(const IntervalBracket& i, const Rational& s) {
  if (i.exact()) return blow_up(i.inner, s);
  if (i.inner.left != i.outer.left) throw DomainError("bracket blow-up needs a shared left end");
  // With x the half-length, the left end moves by x - x^s, which is convex in
  // x, and the right end by x + x^s, which is increasing.
  IntervalBracket small = blow_up(i.inner, s);
  IntervalBracket large = blow_up(i.outer, s);
  Rational a = i.inner.left;
  RatedInterval inner = small.inner;
  inner.left = std::max(small.inner.left, large.inner.left);
  Rational rho_s_hi = Rational(large.outer.right - large.outer.left) / 2;
  RatedInterval outer = large.outer;
  outer.left = a - rho_s_hi;
  return {inner, outer};
}

std::vector<std::size_t> finite_depth_hits(const Rational& x, const PsiSpec& rate, std::size_t N) {
  require_unit_interval(x);
  std::vector<std::size_t> hits;
  if (N == 0) return hits;
  DigitList ds = digit_prefix(x, N);
  for (const auto& t : convergents(ds)) {
    Rational err = x - t.value();
    if (sgn(err) > 0 && compare_with_psi(rate, t.Q, Rational(err * t.Q)) < 0) hits.push_back(t.depth);
  }
  return hits;
}

bool blow_up_contains_window(const ConvergentTriple& t, const Rational& tau, const Rational& s) {
  require_exponent(s);
  return reach_sign(t.Q, t.d_last, tau, s, make_rational(1, t.Q)) >= 0;
}

bool blow_up_contains_cylinder(const ConvergentTriple& t, const Rational& tau, const Rational& s) {
  require_exponent(s);
  return reach_sign(t.Q, t.d_last, tau, s, make_rational(1, (t.d_last - 1) * t.Q)) >= 0;
}

MtpCoverage mtp_coverage(const Rational& tau, const Rational& s, std::size_t depth, const Integer& q_max,
                         std::size_t cap) {
  require_exponent(s);
  if (sgn(tau) < 0) throw DomainError("tau must be non-negative");
  if (depth == 0) throw DomainError("depth must be positive");
  Integer min_q;
  mpz_ui_pow_ui(min_q.get_mpz_t(), 2, depth);
  if (q_max < min_q) throw DomainError("q_max must be at least 2^depth");

  // Tail cylinders have Q > q_max. For tau = 0 every rate interval is its
  // cylinder; for (1+tau)s < 1 the blow-up radius beats 1/Q once
  // Q^((1-(1+tau)s)/s) >= 2.
  bool tails_certified = sgn(tau) == 0;
  Rational slack = 1 - (1 + tau) * s;
  if (!tails_certified && sgn(slack) > 0) {
    tails_certified = compare_pow(Rational(q_max + 1), Rational(slack / s), Rational(2)) >= 0;
  }
  Real delta = mul(pow_enclosure(Rational(2), Rational(-s)).hi,
                   pow_enclosure(Rational(q_max + 1), Rational(-(1 + tau) * s)).hi, Round::up);

  CoverageWalk walk{tau, s, depth, q_max, cap, PsiSpec::power(tau), tails_certified, delta, {}, {}};
  walk.node(0, Rational(0), Integer(1));

  MtpCoverage out;
  out.tau = tau;
  out.s = s;
  out.depth = depth;
  out.q_max = q_max;
  out.certified_cylinder_mass = walk.certified_mass;
  out.lower = std::max(walk.certified_mass, fixed_union(walk.inner));
  out.upper = fixed_union(walk.outer);
  out.intervals = walk.intervals;
  out.tail_regions = walk.tail_regions;
  out.tails_certified = tails_certified;
  return out;
}

}  // namespace luroth
