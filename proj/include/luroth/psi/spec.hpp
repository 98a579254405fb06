// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "luroth/rational.hpp"
#include "luroth/real.hpp"

namespace luroth {

// psi(q) = q^-tau
struct PsiPower {
  Rational tau;
};

// psi(q) = min(1, q^-tau (log(q+1))^-beta)
struct PsiPowerLog {
  Rational tau;
  Rational beta;
};

// psi(q) = q^-(tau + nu2(q)); not eventually non-increasing.
struct PsiTwoAdic {
  Rational tau;
};

struct PsiConstant {
  Rational c;
};

// User table loaded from a `q,psi` CSV. Missing q is an error at evaluation.
struct PsiTable {
  std::string path;
  std::shared_ptr<const std::map<Integer, Rational>> values;
};

using PsiFamily = std::variant<PsiPower, PsiPowerLog, PsiTwoAdic, PsiConstant, PsiTable>;

// psi: N -> (0,1] from the closed catalog above.
struct PsiSpec {
  PsiFamily family;

  // Grammar: power:tau=<r> | two-adic:tau=<r> | power-log:tau=<r>,beta=<r>
  //          | const:c=<r> | table:<path>
  static PsiSpec parse(std::string_view text);
  static PsiSpec power(const Rational& tau);
  static PsiSpec table(std::string path, std::map<Integer, Rational> values);

  std::string to_string() const;
};

// Reads a `q,psi` CSV (optional header line). Every psi must lie in (0,1].
std::map<Integer, Rational> load_psi_table(const std::string& path);

// Exact when rational, otherwise a directed enclosure.
Number psi_eval(const PsiSpec& spec, const Integer& q, mpfr_prec_t prec = Real::kDefaultPrecision);

// Sign of v - psi(q), decided exactly (escalating precision for power-log).
int compare_with_psi(const PsiSpec& spec, const Integer& q, const Rational& v);

// log psi(q) in extended precision, for fast scans where the last ulp is
// irrelevant.
long double log_psi(const PsiSpec& spec, const Integer& q);

}  // namespace luroth
