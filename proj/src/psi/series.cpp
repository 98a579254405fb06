// SPDX-License-Identifier: Apache-2.0

#include "luroth/psi/series.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "luroth/error.hpp"

namespace luroth {

namespace {

constexpr std::uint64_t kBlock = 1u << 15;

// Exponent thresholds for the trend verdict.
constexpr double kDivergingExponent = -0.05;
constexpr double kConvergingExponent = -0.1;

long double ld(const Rational& r) { return static_cast<long double>(r.get_d()); }

class LogPsi {
 public:
  explicit LogPsi(const PsiSpec& spec) : spec_(spec) {
    if (auto* f = std::get_if<PsiPower>(&spec.family)) tau_ = ld(f->tau);
    if (auto* f = std::get_if<PsiTwoAdic>(&spec.family)) tau_ = ld(f->tau);
    if (auto* f = std::get_if<PsiPowerLog>(&spec.family)) {
      tau_ = ld(f->tau);
      beta_ = ld(f->beta);
    }
    if (std::holds_alternative<PsiConstant>(spec.family)) log_c_ = log_psi(spec, Integer(1));
  }

  long double operator()(std::uint64_t q) const {
    long double lq = std::log(static_cast<long double>(q));
    switch (spec_.family.index()) {
      case 0:
        return -tau_ * lq;
      case 1: {
        long double l = -tau_ * lq - beta_ * std::log(std::log1p(static_cast<long double>(q)));
        return l < 0 ? l : 0.0L;
      }
      case 2:
        return -(tau_ + static_cast<long double>(__builtin_ctzll(q))) * lq;
      case 3:
        return log_c_;
      default:
        return log_psi(spec_, Integer(static_cast<unsigned long>(q)));
    }
  }

 private:
  const PsiSpec& spec_;
  long double tau_ = 0, beta_ = 0, log_c_ = 0;
};

// Neumaier-compensated accumulator.
struct Sum {
  long double total = 0, carry = 0;
  void add(long double x) {
    long double t = total + x;
    if (std::fabs(total) >= std::fabs(x)) {
      carry += (total - t) + x;
    } else {
      carry += (x - t) + total;
    }
    total = t;
  }
  long double value() const { return total + carry; }
};

std::vector<std::pair<std::uint64_t, long double>> partial_sums(const std::function<long double(std::uint64_t)>& term,
                                                                std::vector<std::uint64_t> checkpoints,
                                                                unsigned threads) {
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.empty() || checkpoints.front() == 0) throw DomainError("series checkpoints must be positive");

  struct Segment {
    std::uint64_t lo, hi;
  };
  std::vector<Segment> segments;
  std::vector<std::size_t> segment_end;  // one past the last segment of each checkpoint
  std::uint64_t start = 1;
  for (std::uint64_t c : checkpoints) {
    while (start <= c) {
      std::uint64_t hi = std::min(c, start + kBlock - 1);
      segments.push_back({start, hi});
      start = hi + 1;
    }
    segment_end.push_back(segments.size());
  }

  std::vector<long double> sums(segments.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < segments.size(); i = next++) {
      Sum s;
      for (std::uint64_t q = segments[i].lo; q <= segments[i].hi; ++q) s.add(term(q));
      sums[i] = s.value();
    }
  };
  unsigned n = std::max(1u, threads);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<std::pair<std::uint64_t, long double>> out;
  Sum running;
  std::size_t seg = 0;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    for (; seg < segment_end[i]; ++seg) running.add(sums[seg]);
    out.emplace_back(checkpoints[i], running.value());
  }
  return out;
}

}  // namespace

std::string to_string(SeriesKind k) { return k == SeriesKind::khintchine ? "khintchine" : "dodson"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::diverging_trend:
      return "diverging-trend";
    case Verdict::converging_trend:
      return "converging-trend";
    case Verdict::inconclusive:
      break;
  }
  return "inconclusive";
}

std::string to_string(AnalyticVerdict v) { return v == AnalyticVerdict::converges ? "converges" : "diverges"; }

Verdict trend_verdict(const std::vector<std::pair<std::uint64_t, long double>>& sums, std::optional<double>* exponent) {
  if (exponent) exponent->reset();
  if (sums.empty()) return Verdict::inconclusive;
  bool all_zero = std::all_of(sums.begin(), sums.end(), [](const auto& p) { return p.second == 0; });
  if (all_zero) return Verdict::converging_trend;
  if (sums.size() < 3) return Verdict::inconclusive;
  const auto& [q0, s0] = sums[sums.size() - 3];
  const auto& [q1, s1] = sums[sums.size() - 2];
  const auto& [q2, s2] = sums[sums.size() - 1];
  double l0 = std::log(static_cast<double>(q0)), l1 = std::log(static_cast<double>(q1)),
         l2 = std::log(static_cast<double>(q2));
  if (l1 <= l0 || l2 <= l1) return Verdict::inconclusive;
  double prev = static_cast<double>(s1 - s0) / (l1 - l0);
  double last = static_cast<double>(s2 - s1) / (l2 - l1);
  if (last <= 0) return Verdict::converging_trend;
  if (prev <= 0) return Verdict::inconclusive;
  double e = std::log(last / prev) / ((l1 + l2) / 2 - (l0 + l1) / 2);
  if (exponent) *exponent = e;
  if (e >= kDivergingExponent) return Verdict::diverging_trend;
  if (e <= kConvergingExponent) return Verdict::converging_trend;
  return Verdict::inconclusive;
}

std::optional<AnalyticVerdict> khintchine_analytic(const PsiSpec& spec) {
  using V = AnalyticVerdict;
  if (auto* f = std::get_if<PsiConstant>(&spec.family)) return f->c < 1 ? V::diverges : V::converges;
  if (std::holds_alternative<PsiPower>(spec.family) || std::holds_alternative<PsiTwoAdic>(spec.family)) {
    return V::converges;  // tau = 0 gives psi = 1 on the odd q and zero terms there
  }
  if (auto* f = std::get_if<PsiPowerLog>(&spec.family)) {
    if (sgn(f->tau) > 0) return V::converges;
    // tau = 0: terms behave like beta log log q / (q (log q)^beta).
    return (sgn(f->beta) > 0 && f->beta <= 1) ? V::diverges : V::converges;
  }
  return std::nullopt;
}

std::optional<AnalyticVerdict> dodson_analytic(const PsiSpec& spec, const Rational& s) {
  using V = AnalyticVerdict;
  if (std::holds_alternative<PsiConstant>(spec.family)) return V::diverges;
  if (auto* f = std::get_if<PsiPower>(&spec.family)) return (1 + f->tau) * s <= 1 ? V::diverges : V::converges;
  if (auto* f = std::get_if<PsiTwoAdic>(&spec.family)) return (1 + f->tau) * s <= 1 ? V::diverges : V::converges;
  if (auto* f = std::get_if<PsiPowerLog>(&spec.family)) {
    // Terms behave like q^-((1+tau)s) (log q)^(1 - beta s).
    Rational e = (1 + f->tau) * s;
    if (e < 1) return V::diverges;
    if (e > 1) return V::converges;
    return f->beta * s <= 2 ? V::diverges : V::converges;
  }
  return std::nullopt;
}

SeriesReport khintchine_series(const PsiSpec& spec, std::vector<std::uint64_t> checkpoints, unsigned threads) {
  LogPsi log_psi_of(spec);
  auto term = [&](std::uint64_t q) -> long double {
    long double l = log_psi_of(q);
    if (l == 0) return 0;
    return -std::exp(l) * l / static_cast<long double>(q);
  };
  SeriesReport r;
  r.kind = SeriesKind::khintchine;
  r.partial_sums = partial_sums(term, std::move(checkpoints), threads);
  r.verdict = trend_verdict(r.partial_sums, &r.tail_exponent);
  r.analytic_verdict = khintchine_analytic(spec);
  return r;
}

SeriesReport dodson_series(const PsiSpec& spec, const Rational& s, std::vector<std::uint64_t> checkpoints,
                           unsigned threads) {
  if (sgn(s) <= 0 || s > 1) throw DomainError("dodson series needs 0 < s <= 1");
  LogPsi log_psi_of(spec);
  long double sl = ld(s);
  auto term = [&](std::uint64_t q) -> long double {
    long double lq = std::log(static_cast<long double>(q));
    return std::exp(sl * (log_psi_of(q) - lq)) * lq;
  };
  SeriesReport r;
  r.kind = SeriesKind::dodson;
  r.s = s;
  r.partial_sums = partial_sums(term, std::move(checkpoints), threads);
  r.verdict = trend_verdict(r.partial_sums, &r.tail_exponent);
  r.analytic_verdict = dodson_analytic(spec, s);
  return r;
}

}  // namespace luroth
