// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "luroth/psi/spec.hpp"

namespace luroth {

// Window proxies for the lower and upper orders at infinity: the minimum and
// maximum of -log psi(q) / log q over q in [q_min, q_max]. They are
// statements about the window, not limits. With restricted_k set, q runs over
// the increasing enumeration of S_k within the window instead.
struct OrderEstimate {
  Number lower;
  Number upper;
  Integer arg_lower;
  Integer arg_upper;
  Integer q_min;
  Integer q_max;
  std::optional<std::size_t> restricted_k;
  std::size_t points = 0;
};

// -log psi(q) / log q for q >= 2; exact for power, two-adic and psi = 1.
Number order_ratio(const PsiSpec& spec, const Integer& q, mpfr_prec_t prec = Real::kDefaultPrecision);

// Every q in [1, q_max) with psi(q+1) > psi(q).
std::vector<Integer> monotonicity_violations(const PsiSpec& spec, const Integer& q_max);

OrderEstimate order_estimate(const PsiSpec& spec, const Integer& q_min, const Integer& q_max);

// Same scan over the distinct denominators of S_k in [2^k, q_max].
OrderEstimate lambda_order_estimate(const PsiSpec& spec, std::size_t k, const Integer& q_max);

// theta_s(q) = q^(1-s) psi(q)^s for 0 < s <= 1; theta_1 is psi itself.
class Theta {
 public:
  Theta(PsiSpec psi, Rational s);
  Number operator()(const Integer& q) const;
  const Rational& s() const { return s_; }

 private:
  PsiSpec psi_;
  Rational s_;
};

Theta theta(const PsiSpec& spec, const Rational& s);

}  // namespace luroth
