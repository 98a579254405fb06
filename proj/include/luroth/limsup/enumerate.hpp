// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "luroth/core/luroth.hpp"

namespace luroth {

// An element of S together with the digit tuple that produced it.
struct STriple : ConvergentTriple {
  DigitList digits;
};

constexpr std::size_t kDefaultIntervalCap = 10'000'000;

// Visits every digit tuple with Q <= q_max and depth <= max_depth (0 means
// unbounded) in depth-first lexicographic order. Q grows strictly along a
// tuple, so the pruning is exact. The callback may return false to skip the
// subtree below the visited tuple.
void for_each_tuple(const Integer& q_max, std::size_t max_depth,
                    const std::function<bool(const STriple&)>& visit);

// All of S up to q_max, ordered by Q, then depth, then digits.
std::vector<STriple> enumerate_S(const Integer& q_max, std::size_t cap = kDefaultIntervalCap);

// Depth-exactly-k part of S up to q_max. Throws DomainError if q_max < 2^k.
std::vector<STriple> enumerate_S_k(std::size_t k, const Integer& q_max, std::size_t cap = kDefaultIntervalCap);

bool s_order_less(const STriple& a, const STriple& b);

// CSV `P,Q,d,depth,digits` with digits joined by '|'.
std::string triple_csv_header();
std::string triple_csv_row(const STriple& t);

}  // namespace luroth
