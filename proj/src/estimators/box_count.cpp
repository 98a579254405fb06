// SPDX-License-Identifier: Apache-2.0

#include "luroth/estimators/box_count.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>
#include <utility>

#include "luroth/error.hpp"
#include "luroth/limsup/enumerate.hpp"
#include "luroth/real.hpp"

namespace luroth {

namespace {

constexpr unsigned kMaxGridExponent = 62;

// Marked cells as closed index ranges; merged at the end.
class CellSet {
 public:
  explicit CellSet(unsigned m) : scale_(Integer(1) << m) {}

  // Cell containing points just right of x.
  std::uint64_t open_left(const Rational& x) const { return floor(x * scale_).get_ui(); }
  // Cell containing x as its closed right end.
  std::uint64_t closed_right(const Rational& x) const { return ceil(x * scale_).get_ui() - 1; }
  Rational cell_left(std::uint64_t k) const { return Rational(Integer(static_cast<unsigned long>(k)), scale_); }

  void mark(std::uint64_t lo, std::uint64_t hi) { ranges_.emplace_back(lo, hi); }

  std::uint64_t count() {
    std::sort(ranges_.begin(), ranges_.end());
    std::uint64_t total = 0;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> cur;
    for (auto [lo, hi] : ranges_) {
      if (cur && lo <= cur->second + 1) {
        cur->second = std::max(cur->second, hi);
        continue;
      }
      if (cur) total += cur->second - cur->first + 1;
      cur = {lo, hi};
    }
    if (cur) total += cur->second - cur->first + 1;
    return total;
  }

 private:
  Integer scale_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges_;
};

// Marks the cells met by the rate interval (lo, lo + l] or (lo, lo + l), with
// l = min(Q^-(1+tau), 1/((d-1)Q)). Either way the last cell is the largest k
// with k 2^-m < lo + l.
void mark_rate_interval(CellSet& cells, const Rational& lo, const Integer& Q, const Integer& d, const Rational& tau) {
  Rational cyl = make_rational(1, (d - 1) * Q);
  Rational base = make_rational(1, Q);
  Rational expo = 1 + tau;
  std::uint64_t first = cells.open_left(lo);
  if (compare_pow(base, expo, cyl) >= 0) {
    cells.mark(first, cells.closed_right(lo + cyl));
    return;
  }
  if (auto len = exact_pow(base, expo)) {
    cells.mark(first, cells.closed_right(lo + *len));
    return;
  }
  // Irrational length: start from a float guess and settle each step exactly.
  double guess = to_double(lo) + std::pow(to_double(base), to_double(expo));
  std::uint64_t k = std::max(first, cells.open_left(Rational(guess)));
  auto below_end = [&](std::uint64_t j) { return compare_pow(base, expo, cells.cell_left(j) - lo) > 0; };
  while (k > first && !below_end(k)) --k;
  while (below_end(k + 1)) ++k;
  cells.mark(first, k);
}

// Depth-first walk over cylinders. A cylinder inside one cell marks it and
// stops: every cylinder contains depth-n rate intervals.
class UnionWalk {
 public:
  UnionWalk(CellSet& cells, const Rational& tau, std::size_t depth) : cells_(cells), tau_(tau), depth_(depth) {}

  void run() { visit(Rational(0), Integer(1), 0); }

 private:
  // Cylinder (a, a + 1/W] at depth k.
  void visit(const Rational& a, const Integer& W, std::size_t k) {
    Rational L = make_rational(1, W);
    std::uint64_t c0 = cells_.open_left(a);
    if (c0 == cells_.closed_right(a + L)) {
      cells_.mark(c0, c0);
      return;
    }
    Integer d = 2;
    for (;;) {
      Rational lo = a + L / d;
      Rational hi = a + L / (d - 1);
      std::uint64_t j0 = cells_.open_left(lo);
      if (j0 == cells_.closed_right(hi)) {
        cells_.mark(j0, j0);
        // Children move left towards a as d grows; skip all that stay in cell j0.
        Rational b = cells_.cell_left(j0);
        if (b <= a) return;
        d = floor(L / (b - a)) + 1;
        continue;
      }
      Integer childQ = W * d;
      if (k + 1 == depth_) {
        mark_rate_interval(cells_, lo, childQ, d, tau_);
      } else {
        visit(lo, W * d * (d - 1), k + 1);
      }
      ++d;
    }
  }

  CellSet& cells_;
  const Rational& tau_;
  std::size_t depth_;
};

// Band index m with 2^m <= Q^(1+tau) < 2^(m+1).
long band_of(const Integer& Q, const Rational& expo) {
  long m = static_cast<long>(std::floor(to_double(expo) * std::log2(Q.get_d())));
  auto two_pow = [](long e) { return Rational(Integer(1) << static_cast<mp_bitcnt_t>(e)); };
  while (m > 0 && compare_pow(Rational(Q), expo, two_pow(m)) < 0) --m;
  while (compare_pow(Rational(Q), expo, two_pow(m + 1)) >= 0) ++m;
  return m;
}

void least_squares(BoxCountFit& fit) {
  double n = static_cast<double>(fit.ms.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> ys;
  for (std::size_t i = 0; i < fit.ms.size(); ++i) {
    double x = fit.ms[i];
    double y = fit.counts[i] ? std::log2(static_cast<double>(fit.counts[i])) : 0.0;
    ys.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    double e = ys[i] - (fit.intercept + fit.slope * fit.ms[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
}

}  // namespace

BoxCountFit box_count_dim(const Rational& tau, std::size_t depth, std::vector<unsigned> ms, BoxCountMode mode,
                          unsigned threads) {
  if (sgn(tau) < 0) throw DomainError("box counting needs tau >= 0");
  if (depth == 0) throw DomainError("box counting needs depth >= 1");
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  if (ms.size() < 2) throw DomainError("slope fit needs at least two grid exponents");
  if (ms.back() > kMaxGridExponent) throw DomainError("grid exponent above 62");

  BoxCountFit fit;
  fit.tau = tau;
  fit.depth = depth;
  fit.mode = mode;
  fit.ms = ms;
  fit.counts.assign(ms.size(), 0);
  Rational expo = 1 + tau;
  // Longest depth-n interval belongs to the all-2 tuple, Q = 2^depth.
  fit.fine_grid = Rational(ms.back()) > expo * depth;

  if (mode == BoxCountMode::depth_union) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < ms.size(); i = next++) {
        CellSet cells(ms[i]);
        UnionWalk(cells, tau, depth).run();
        fit.counts[i] = cells.count();
      }
    };
    unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(ms.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  } else {
    std::vector<CellSet> cells;
    for (unsigned m : ms) cells.emplace_back(m);
    // Q^(1+tau) < 2^(m_max+1) bounds the denominators that matter.
    Integer q_max = floor(Rational(pow_enclosure(Rational(2), Rational(ms.back() + 1, 1) / expo).hi.to_rational()));
    for_each_tuple(q_max, depth, [&](const STriple& t) {
      long b = band_of(t.Q, expo);
      auto it = std::lower_bound(ms.begin(), ms.end(), static_cast<unsigned>(std::max(b, 0L)));
      if (b >= 0 && it != ms.end() && *it == static_cast<unsigned>(b)) {
        mark_rate_interval(cells[it - ms.begin()], t.value(), t.Q, t.d_last, tau);
      }
      return true;
    });
    for (std::size_t i = 0; i < ms.size(); ++i) fit.counts[i] = cells[i].count();
  }
  least_squares(fit);
  return fit;
}

}  // namespace luroth
