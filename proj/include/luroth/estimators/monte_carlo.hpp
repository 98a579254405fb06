// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "luroth/psi/spec.hpp"
#include "luroth/rational.hpp"

namespace luroth {

// Hit fractions at finite depth are trend evidence only: membership in the
// limsup set is not decidable from finitely many convergents.
struct MCReport {
  PsiSpec spec;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  std::size_t hits = 0;  // samples with a hit at some depth in [n0, n1]
  Rational fraction;     // hits / samples
  // Largest number of 64-bit words any sample needed; see mc_hit_fraction.
  std::size_t max_words = 0;
};

constexpr std::size_t kMaxSampleWords = 16;

// Sample i is x = (K + 1) / 2^(64c), where K is the first c words drawn from a
// generator seeded by (seed, i). c starts at 1 and grows until the depth-n1
// cylinder of x has length at least 2^16 / 2^(64c), so the digits up to n1 are
// those of the sampled point rather than of the truncation. With c = 1 this is
// the cap Q_{n1} (d_{n1} - 1) <= 2^48. A hit at depth n means
// 0 < x - P_n/Q_n < psi(Q_n)/Q_n, decided exactly.
// Throws DomainError unless samples >= 1 and 1 <= n0 <= n1, and
// ResourceCapExceeded if a sample needs more than kMaxSampleWords words.
MCReport mc_hit_fraction(const PsiSpec& spec, std::size_t n0, std::size_t n1, std::size_t samples,
                         std::uint64_t seed, unsigned threads = 1);

}  // namespace luroth
