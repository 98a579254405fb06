// SPDX-License-Identifier: Apache-2.0

#include "luroth/estimators/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>
#include <vector>

#include "luroth/core/luroth.hpp"
#include "luroth/error.hpp"

namespace luroth {

namespace {

constexpr std::size_t kBlock = 64;
constexpr unsigned kResolutionBits = 16;

std::mt19937_64 sample_engine(std::uint64_t seed, std::size_t index) {
  auto i = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  return std::mt19937_64(seq);
}

struct Sample {
  bool hit = false;
  std::size_t words = 0;
};

Sample run_sample(const PsiSpec& spec, std::size_t n0, std::size_t n1, std::uint64_t seed, std::size_t index) {
  std::mt19937_64 engine = sample_engine(seed, index);
  Integer K = 0;
  std::vector<std::pair<Integer, Rational>> window;  // (Q_n, x - P_n/Q_n scaled by Q_n)
  for (std::size_t c = 1; c <= kMaxSampleWords; ++c) {
    K = (K << 64) + Integer(static_cast<unsigned long>(engine()));
    Integer denom = Integer(1) << static_cast<mp_bitcnt_t>(64 * c);
    Rational y = make_rational(K + 1, denom);  // T^n x
    Integer W = 1;                             // prod d_i (d_i - 1)
    window.clear();
    for (std::size_t n = 1; n <= n1; ++n) {
      Digit d = first_digit(y);
      Integer Q = W * d;
      W *= d * (d - 1);
      y = luroth_map(y);
      // Q_n (x - P_n/Q_n) = T^n x / (d_n - 1)
      if (n >= n0) window.emplace_back(std::move(Q), y / (d - 1));
    }
    if ((W << kResolutionBits) > denom) continue;
    Sample out{false, c};
    for (const auto& [Q, gap] : window) {
      if (compare_with_psi(spec, Q, gap) < 0) {
        out.hit = true;
        break;
      }
    }
    return out;
  }
  throw ResourceCapExceeded("sample needs more than 16 words to resolve the window");
}

}  // namespace

MCReport mc_hit_fraction(const PsiSpec& spec, std::size_t n0, std::size_t n1, std::size_t samples,
                         std::uint64_t seed, unsigned threads) {
  if (samples == 0) throw DomainError("Monte Carlo needs at least one sample");
  if (n0 < 1 || n0 > n1) throw DomainError("Monte Carlo window needs 1 <= N0 <= N1");

  std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::size_t> block_hits(blocks), block_words(blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t b = next++; b < blocks && !failed; b = next++) {
      try {
        for (std::size_t i = b * kBlock; i < std::min(samples, (b + 1) * kBlock); ++i) {
          Sample s = run_sample(spec, n0, n1, seed, i);
          block_hits[b] += s.hit;
          block_words[b] = std::max(block_words[b], s.words);
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  unsigned n = std::max(1u, threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  MCReport r;
  r.spec = spec;
  r.seed = seed;
  r.samples = samples;
  r.n0 = n0;
  r.n1 = n1;
  for (std::size_t b = 0; b < blocks; ++b) {
    r.hits += block_hits[b];
    r.max_words = std::max(r.max_words, block_words[b]);
  }
  r.fraction = make_rational(Integer(static_cast<unsigned long>(r.hits)), Integer(static_cast<unsigned long>(samples)));
  return r;
}

}  // namespace luroth
