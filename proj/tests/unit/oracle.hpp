// Reference computations written independently of the library: digits by
// locating x among the points 1/d, values by summing the series term by term.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Frac = mpq_class;
using Z = mpz_class;

// d with 1/d < x <= 1/(d-1).
inline Z digit(const Frac& x) {
  Z d = 2;
  Frac inv = 1 / x;  // d - 1 <= 1/x < d
  mpz_fdiv_q(d.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
  d += 1;
  while (Frac(1, 1) / d >= x) d += 1;
  while (d > 2 && Frac(1) / (d - 1) < x) d -= 1;
  return d;
}

// Inverse of the branch (1/d, 1/(d-1)]: x = 1/d + y / (d(d-1)).
inline Frac shift(const Frac& x, const Z& d) { return (x - Frac(1) / d) * d * (d - 1); }

inline std::vector<Z> digits(Frac x, std::size_t n) {
  std::vector<Z> out;
  for (std::size_t i = 0; i < n; ++i) {
    Z d = digit(x);
    out.push_back(d);
    x = shift(x, d);
    x.canonicalize();
  }
  return out;
}

struct Conv {
  Z P, Q;
  Frac value;
};

// Partial sums of sum_k 1/d_k prod_{i<k} 1/(d_i (d_i - 1)); Q = d_n prod_{i<n} d_i (d_i - 1).
inline std::vector<Conv> convergents(const std::vector<Z>& ds) {
  std::vector<Conv> out;
  Frac sum = 0;
  Z weight = 1;
  for (const Z& d : ds) {
    sum += Frac(1) / (weight * d);
    Z q = weight * d;
    Frac p = sum * q;
    out.push_back({p.get_num(), q, sum});
    weight *= d * (d - 1);
  }
  return out;
}

inline Frac evaluate_tail_twos(const std::vector<Z>& prefix) {
  // Value of prefix followed by 2,2,2,...: the right end of the prefix cylinder.
  Z weight = 1;
  Frac sum = 0;
  for (const Z& d : prefix) {
    sum += Frac(1) / (weight * d);
    weight *= d * (d - 1);
  }
  return sum + Frac(1) / weight;
}

// Rationals spread over (0,1] with moderate denominators.
inline std::vector<Frac> corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Frac> out;
  while (out.size() < count) {
    std::uint64_t den = 2 + rng() % 1'000'000'000ull;
    std::uint64_t num = 1 + rng() % den;
    Frac x(Z(static_cast<unsigned long>(num)), Z(static_cast<unsigned long>(den)));
    x.canonicalize();
    out.push_back(x);
  }
  return out;
}

}  // namespace oracle
