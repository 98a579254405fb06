// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "luroth/rational.hpp"
#include "luroth/real.hpp"

namespace luroth {

enum class DigitSeriesKind {
  pair,    // sum over d >= 2 of (d(d-1))^-a, finite for a > 1/2
  single,  // sum over d >= 2 of d^-a = zeta(a) - 1, finite for a > 1
};

// Certified enclosure of the series. The head is summed directly and the tail
// by Euler-Maclaurin; both summands are completely monotone, so the first
// omitted correction bounds the remainder. Throws DivergentParameter outside
// the convergence range.
Enclosure digit_series(const Rational& a, DigitSeriesKind kind, mpfr_prec_t prec = Real::kDefaultPrecision);
// Both series decrease in a, so an enclosure of a maps to an enclosure.
Enclosure digit_series(const Enclosure& a, DigitSeriesKind kind, mpfr_prec_t prec = Real::kDefaultPrecision);

struct PressureRoot {
  Rational tau;
  Real s_star;
  Real residual;  // upper bound for |r(s_star) - 1|
  std::size_t iterations = 0;
};

// Root in s of digit_series((1+tau)s, pair) = 1, by the Illinois variant of
// regula falsi on a bracket inside the convergence range.
PressureRoot pressure_root(const Rational& tau, mpfr_prec_t prec = Real::kDefaultPrecision);

struct CoverSum {
  Rational tau;
  Rational s;
  unsigned long j = 0;
  std::size_t n = 0;
  Rational exponent;  // (1 + tau + j) s
  Enclosure r;        // pair series at the exponent
  Enclosure C;        // single series at the exponent
  Enclosure value;    // r^(n-1) C
};

// Requires s > 1/(1+tau+j).
CoverSum cover_sum(const Rational& tau, unsigned long j, const Rational& s, std::size_t n);

// The same quantity summed tuple by tuple: all depth-n tuples with Q <= q_cap
// contribute Q^-a, and the rest is bounded through an intermediate exponent.
struct ExplicitCoverSum {
  Enclosure partial;     // tuples with Q <= q_cap
  Real tail_bound;       // rounded up
  Enclosure total;       // [partial.lo, partial.hi + tail_bound]
  std::size_t tuples = 0;
};

ExplicitCoverSum explicit_cover_sum(const Rational& tau, unsigned long j, const Rational& s, std::size_t n,
                                    const Integer& q_cap);

struct DecayRow {
  unsigned long j = 0;
  Rational s;
  Rational dimension_bound;  // 1/(1+tau+j)
  CoverSum level;            // cover sum at the reported depth
  std::size_t depth = 0;     // first depth with value below the threshold
};

// For each j, the first depth at which the weighted cover sum at
// s = 1/(1+tau+j) + s_margin drops below `threshold`.
std::vector<DecayRow> dimension_decay(const Rational& tau, const std::vector<unsigned long>& j_list,
                                           const Rational& s_margin, const Rational& threshold = Rational(1, 1000000));

}  // namespace luroth
