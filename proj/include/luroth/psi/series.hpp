// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "luroth/psi/spec.hpp"

namespace luroth {

enum class SeriesKind { khintchine, dodson };
enum class Verdict { diverging_trend, converging_trend, inconclusive };
enum class AnalyticVerdict { converges, diverges };

std::string to_string(SeriesKind k);
std::string to_string(Verdict v);
std::string to_string(AnalyticVerdict v);

struct SeriesReport {
  SeriesKind kind = SeriesKind::khintchine;
  std::optional<Rational> s;  // dodson only
  // (Q, sum of terms q = 1..Q), in increasing Q.
  std::vector<std::pair<std::uint64_t, long double>> partial_sums;
  Verdict verdict = Verdict::inconclusive;
  // Local growth exponent of the partial sums in log Q, used by the verdict.
  std::optional<double> tail_exponent;
  std::optional<AnalyticVerdict> analytic_verdict;
};

// Partial sums of -psi(q) log psi(q) / q. Terms are evaluated in extended
// precision and summed with compensation over fixed blocks, so the result
// does not depend on `threads`.
SeriesReport khintchine_series(const PsiSpec& spec, std::vector<std::uint64_t> checkpoints, unsigned threads = 1);

// Partial sums of (psi(q)/q)^s log q, 0 < s <= 1.
SeriesReport dodson_series(const PsiSpec& spec, const Rational& s, std::vector<std::uint64_t> checkpoints,
                           unsigned threads = 1);

// Known answers for the catalog families; nullopt for tables.
std::optional<AnalyticVerdict> khintchine_analytic(const PsiSpec& spec);
std::optional<AnalyticVerdict> dodson_analytic(const PsiSpec& spec, const Rational& s);

// Trend from the last three checkpoints: the growth exponent of the per-log-Q
// increment. Near zero or above means harmonic-like growth.
Verdict trend_verdict(const std::vector<std::pair<std::uint64_t, long double>>& sums,
                      std::optional<double>* exponent = nullptr);

}  // namespace luroth
