// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "luroth/core/luroth.hpp"
#include "luroth/limsup/enumerate.hpp"
#include "luroth/limsup/interval.hpp"
#include "luroth/psi/spec.hpp"

namespace luroth {

// (P/Q, P/Q + psi(Q)/Q) intersected with the cylinder tail
// (P/Q, P/Q + 1/((d-1)Q)]. A pure rate tau is PsiSpec::power(tau).
IntervalBracket rate_interval(const ConvergentTriple& t, const PsiSpec& rate);

// Same centre, radius rho^s with rho the half-length. Requires 0 < s <= 1.
IntervalBracket blow_up(const RatedInterval& i, const Rational& s);
// inner is blown up from the inner interval rounding inward, outer likewise outward.
IntervalBracket blow_up(const IntervalBracket& i, const Rational& s);

// Depths n <= N with 0 < x - P_n/Q_n < psi(Q_n)/Q_n, decided exactly.
std::vector<std::size_t> finite_depth_hits(const Rational& x, const PsiSpec& rate, std::size_t N);

// Whether (P/Q, P/Q + 1/Q) lies inside the blow-up with exponent s of the
// rate-tau interval of t.
bool blow_up_contains_window(const ConvergentTriple& t, const Rational& tau, const Rational& s);
// Whether the whole cylinder of t lies inside that blow-up, up to its right end
// point (the measure statement).
bool blow_up_contains_cylinder(const ConvergentTriple& t, const Rational& tau, const Rational& s);

struct MtpCoverage {
  Rational tau;
  Rational s;
  std::size_t depth = 0;
  Integer q_max;
  // lower <= measure of the union of blown-up depth-n rate intervals in
  // [0,1] <= upper.
  Rational lower;
  Rational upper;
  // Mass of depth-n cylinders shown to sit inside their own blow-up.
  Rational certified_cylinder_mass;
  std::size_t intervals = 0;
  std::size_t tail_regions = 0;
  bool tails_certified = false;
};

// The depth-n family is infinite: triples with Q <= q_max are handled one by
// one, the rest are grouped into tail regions that are either certified as
// covered (lower bound) or counted in full plus the largest possible blow-up
// reach (upper bound).
MtpCoverage mtp_coverage(const Rational& tau, const Rational& s, std::size_t depth, const Integer& q_max,
                         std::size_t cap = kDefaultIntervalCap);

}  // namespace luroth
