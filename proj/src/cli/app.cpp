// SPDX-License-Identifier: Apache-2.0

#include "luroth/cli/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "luroth/cli/output.hpp"
#include "luroth/core/luroth.hpp"
#include "luroth/error.hpp"
#include "luroth/estimators/box_count.hpp"
#include "luroth/estimators/digit_series.hpp"
#include "luroth/estimators/monte_carlo.hpp"
#include "luroth/limsup/enumerate.hpp"
#include "luroth/limsup/families.hpp"
#include "luroth/psi/orders.hpp"
#include "luroth/psi/series.hpp"

namespace luroth::cli {

namespace {

constexpr const char* kExact = "exact: rational arithmetic, no rounding";
constexpr const char* kHighPrecision = "high-precision: MPFR with directed rounding, enclosures certified";
constexpr const char* kMonteCarlo =
    "monte-carlo: seeded samples, exact per-sample arithmetic; finite-depth trend evidence, not a measure value";
constexpr const char* kEmpirical = "empirical-fit: exact cell counts, floating-point least-squares slope";

struct Options {
  // global
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 7;
  unsigned threads = 1;
  std::string qmax;
  std::optional<std::size_t> depth;
  long precision = Real::kDefaultPrecision;

  // per command
  std::string x;
  std::string digits;
  std::optional<std::size_t> k;
  std::size_t cap = kDefaultIntervalCap;
  std::string tau;
  std::string psi;
  std::string method;
  std::string ms = "8:14";
  std::string mode = "depth-union";
  std::string j = "0";
  std::string margin = "1/20";
  std::string threshold = "1/1000000";
  std::string s;
  std::string windows = "1:5";
  std::size_t samples = 1000;
  std::string checkpoints;
  std::string qmin = "2";
  bool violations = false;
  std::string config;
};

mpfr_prec_t prec_of(const Options& o) { return static_cast<mpfr_prec_t>(o.precision); }

// Significant decimal digits worth printing at the working precision.
int print_digits(const Options& o) { return std::clamp(static_cast<int>(o.precision * 0.30103) - 3, 6, 60); }

std::string text(const Real& r, const Options& o) { return r.to_string(print_digits(o)); }

std::string text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string text(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.18Lg", v);
  return buf;
}

Json rat(const Rational& r) { return format_rational(r); }

Json integer(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Json enclosure(const Enclosure& e, const Options& o) { return Json::array({text(e.lo, o), text(e.hi, o)}); }

Json number(const Number& n, const Options& o) {
  if (n.exact) return rat(*n.exact);
  return enclosure(n.approx, o);
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) out.push_back(part);
  return out;
}

unsigned long parse_count(const std::string& s, const char* what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || s[0] == '-') throw UsageError(std::string("bad ") + what + ": '" + s + "'");
  return v;
}

// "a:b" inclusive ranges joined by commas.
std::vector<std::pair<std::size_t, std::size_t>> parse_windows(const std::string& s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& w : split(s, ',')) {
    auto ab = split(w, ':');
    if (ab.size() != 2) throw UsageError("window must look like N0:N1, got '" + w + "'");
    std::size_t a = parse_count(ab[0], "window"), b = parse_count(ab[1], "window");
    if (a < 1 || a > b) throw UsageError("window needs 1 <= N0 <= N1, got '" + w + "'");
    out.emplace_back(a, b);
  }
  if (out.empty()) throw UsageError("no windows given");
  return out;
}

// "8:14" or "8,10,12".
std::vector<unsigned> parse_grid(const std::string& s) {
  std::vector<unsigned> out;
  auto ab = split(s, ':');
  if (ab.size() == 2) {
    unsigned a = parse_count(ab[0], "grid"), b = parse_count(ab[1], "grid");
    if (a > b) throw UsageError("grid range needs lo <= hi");
    for (unsigned m = a; m <= b; ++m) out.push_back(m);
    return out;
  }
  for (const auto& part : split(s, ',')) out.push_back(parse_count(part, "grid exponent"));
  return out;
}

// "J" means 0..J, a comma list is taken as given.
std::vector<unsigned long> parse_j(const std::string& s) {
  std::vector<unsigned long> out;
  if (s.find(',') == std::string::npos) {
    unsigned long J = parse_count(s, "j");
    for (unsigned long j = 0; j <= J; ++j) out.push_back(j);
    return out;
  }
  for (const auto& part : split(s, ',')) out.push_back(parse_count(part, "j"));
  return out;
}

Integer parse_integer(const std::string& s, const char* what) {
  Rational r = parse_rational(s);
  if (r.get_den() != 1) throw ParseError(std::string(what) + " must be an integer");
  return r.get_num();
}

Integer qmax_or(const Options& o, const Integer& fallback) {
  return o.qmax.empty() ? fallback : parse_integer(o.qmax, "qmax");
}

std::optional<PsiSpec> psi_of(const Options& o) {
  if (o.psi.empty()) return std::nullopt;
  return PsiSpec::parse(o.psi);
}

// The pure rate tau from --tau or a power psi.
std::optional<Rational> tau_of(const Options& o, const std::optional<PsiSpec>& psi) {
  if (!o.tau.empty()) {
    Rational t = parse_rational(o.tau);
    if (sgn(t) < 0) throw DomainError("tau must be >= 0");
    return t;
  }
  if (psi) {
    if (auto* f = std::get_if<PsiPower>(&psi->family)) return f->tau;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- commands

OutputRecord cmd_expand(const Options& o) {
  Rational x = parse_rational(o.x);
  require_unit_interval(x);
  std::size_t n = o.depth.value_or(10);
  DigitSeq seq = digits(x, n);
  DigitList prefix(seq.prefix.begin(), seq.prefix.begin() + static_cast<std::ptrdiff_t>(n));

  OutputRecord r;
  r.provenance = kExact;
  r.summary["x"] = rat(x);
  r.summary["expansion"] = format_digits(seq);
  r.summary["periodic"] = seq.period.has_value();
  if (seq.period) {
    DigitSeq pure{{}, seq.period};
    r.summary["period"] = format_digits(pure);
    r.summary["period_length"] = static_cast<std::uint64_t>(seq.period->size());
  }
  Table& t = r.table("convergents", {"n", "d", "P", "Q", "error", "cylinder_length"});
  std::vector<ConvergentTriple> cs = convergents(prefix);
  for (const auto& c : cs) {
    Rational cyl = make_rational(1, (c.d_last - 1) * c.Q);
    t.add({static_cast<std::uint64_t>(c.depth), integer(c.d_last), integer(c.P), integer(c.Q), rat(x - c.value()),
           rat(cyl)});
  }
  return r;
}

OutputRecord cmd_eval(const Options& o) {
  DigitSeq seq = parse_digits(o.digits);
  OutputRecord r;
  r.provenance = kExact;
  r.summary["digits"] = format_digits(seq);
  if (seq.period) {
    Rational v = evaluate(seq);
    r.summary["value"] = rat(v);
    r.summary["decimal"] = text(to_double(v));
  } else {
    Cylinder c = cylinder(seq.prefix);
    r.summary["cylinder"] = format_interval(RatedInterval::half_open(c.left, c.right()));
    r.summary["left"] = rat(c.left);
    r.summary["length"] = rat(c.length);
  }
  return r;
}

OutputRecord cmd_enum_s(const Options& o) {
  Integer q_max = qmax_or(o, Integer(100));
  std::vector<STriple> ts = o.k ? enumerate_S_k(*o.k, q_max, o.cap) : enumerate_S(q_max, o.cap);
  OutputRecord r;
  r.provenance = kExact;
  r.summary["count"] = static_cast<std::uint64_t>(ts.size());
  Table& t = r.table("triples", {"P", "Q", "d", "depth", "digits"});
  for (const auto& s : ts) {
    std::vector<std::string> ds;
    for (const auto& d : s.digits) ds.push_back(d.get_str());
    t.add({integer(s.P), integer(s.Q), integer(s.d_last), static_cast<std::uint64_t>(s.depth), join(ds, "|")});
  }
  return r;
}

// Window bracket [1/(1 + upper order), 1/(1 + lower order)] for a general psi.
void order_bracket(OutputRecord& r, const PsiSpec& psi, const Options& o) {
  Integer q_max = qmax_or(o, Integer(10000));
  OrderEstimate e = order_estimate(psi, Integer(2), q_max);
  r.summary["order_window"] = Json::array({"2", q_max.get_str()});
  r.summary["order_lower"] = number(e.lower, o);
  r.summary["order_upper"] = number(e.upper, o);
  auto inv = [&](const Number& t) -> Json {
    if (t.exact) return rat(1 / (1 + *t.exact));
    Real one(Rational(1), Round::nearest, prec_of(o));
    return Json::array({text(div(one, add(one, t.approx.hi, Round::up), Round::down), o),
                        text(div(one, add(one, t.approx.lo, Round::down), Round::up), o)});
  };
  r.summary["theory_lower"] = inv(e.upper);
  r.summary["theory_upper"] = inv(e.lower);
}

OutputRecord cmd_dim_pressure(const Options& o, const std::optional<PsiSpec>& psi, const std::optional<Rational>& tau) {
  OutputRecord r;
  r.provenance = kHighPrecision;
  std::vector<Rational> taus;
  if (tau) {
    taus.push_back(*tau);
    r.summary["theory"] = rat(1 / (1 + *tau));
  } else {
    if (!psi) throw UsageError("dim needs --tau or --psi");
    order_bracket(r, *psi, o);
    OrderEstimate e = order_estimate(*psi, Integer(2), qmax_or(o, Integer(10000)));
    for (const Number* n : {&e.lower, &e.upper}) {
      if (n->exact) taus.push_back(*n->exact);
    }
  }
  Table& t = r.table("pressure", {"tau", "s_star", "residual", "iterations", "theory"});
  for (const auto& ta : taus) {
    PressureRoot p = pressure_root(ta, prec_of(o));
    t.add({rat(ta), text(p.s_star, o), text(p.residual, o), static_cast<std::uint64_t>(p.iterations),
           rat(1 / (1 + ta))});
  }
  return r;
}

OutputRecord cmd_dim_box(const Options& o, const std::optional<Rational>& tau) {
  if (!tau) throw UsageError("box counting needs --tau or a power psi");
  BoxCountMode mode;
  if (o.mode == "depth-union") {
    mode = BoxCountMode::depth_union;
  } else if (o.mode == "scale-band") {
    mode = BoxCountMode::scale_band;
  } else {
    throw UsageError("--mode must be depth-union or scale-band");
  }
  BoxCountFit f = box_count_dim(*tau, o.depth.value_or(6), parse_grid(o.ms), mode, o.threads);
  OutputRecord r;
  r.provenance = kEmpirical;
  r.summary["theory"] = rat(1 / (1 + *tau));
  r.summary["slope"] = text(f.slope);
  r.summary["intercept"] = text(f.intercept);
  r.summary["residual"] = text(f.residual);
  r.summary["fine_grid"] = f.fine_grid;
  Table& t = r.table("counts", {"m", "cells", "log2_cells"});
  for (std::size_t i = 0; i < f.ms.size(); ++i) {
    t.add({f.ms[i], f.counts[i], text(std::log2(static_cast<double>(f.counts[i])))});
  }
  return r;
}

OutputRecord cmd_dim_cover(const Options& o, const std::optional<PsiSpec>& psi, const std::optional<Rational>& tau) {
  Rational base_tau;
  std::vector<unsigned long> js = parse_j(o.j);
  if (tau) {
    base_tau = *tau;
  } else if (psi && std::holds_alternative<PsiTwoAdic>(psi->family)) {
    base_tau = std::get<PsiTwoAdic>(psi->family).tau;
  } else {
    throw UsageError("cover sums need --tau, a power psi or a two-adic psi");
  }
  OutputRecord r;
  r.provenance = kHighPrecision;
  if (!o.s.empty()) {
    Rational s = parse_rational(o.s);
    std::size_t n_max = o.depth.value_or(5);
    Table& t = r.table("cover_sum", {"j", "s", "n", "exponent", "r", "C", "value"});
    for (unsigned long j : js) {
      for (std::size_t n = 1; n <= n_max; ++n) {
        CoverSum c = cover_sum(base_tau, j, s, n);
        t.add({j, rat(s), static_cast<std::uint64_t>(n), rat(c.exponent), enclosure(c.r, o), enclosure(c.C, o),
               enclosure(c.value, o)});
      }
    }
    return r;
  }
  Rational margin = parse_rational(o.margin);
  std::vector<DecayRow> rows = dimension_decay(base_tau, js, margin, parse_rational(o.threshold));
  r.summary["tau"] = rat(base_tau);
  r.summary["threshold"] = rat(parse_rational(o.threshold));
  Table& t = r.table("upper_bounds", {"j", "s", "dimension_bound", "depth", "r", "value"});
  for (const auto& d : rows) {
    t.add({d.j, rat(d.s), rat(d.dimension_bound), static_cast<std::uint64_t>(d.depth), enclosure(d.level.r, o),
           enclosure(d.level.value, o)});
  }
  return r;
}

OutputRecord cmd_dim(const Options& o) {
  std::optional<PsiSpec> psi = psi_of(o);
  std::optional<Rational> tau = tau_of(o, psi);
  if (o.method == "pressure") return cmd_dim_pressure(o, psi, tau);
  if (o.method == "box") return cmd_dim_box(o, tau);
  if (o.method == "cover") return cmd_dim_cover(o, psi, tau);
  throw UsageError("--method must be pressure, box or cover");
}

std::vector<std::uint64_t> series_checkpoints(const Options& o) {
  std::vector<std::uint64_t> out;
  if (!o.checkpoints.empty()) {
    for (const auto& c : split(o.checkpoints, ',')) out.push_back(parse_count(c, "checkpoint"));
    return out;
  }
  Integer q_max = qmax_or(o, Integer(1000000));
  if (!q_max.fits_ulong_p() || q_max < 10) throw UsageError("series qmax must be in [10, 2^64)");
  std::uint64_t top = q_max.get_ui();
  for (std::uint64_t c = 10; c < top; c *= 10) out.push_back(c);
  out.push_back(top);
  return out;
}

void add_series(Table& t, const SeriesReport& s) {
  for (const auto& [q, v] : s.partial_sums) {
    t.add({to_string(s.kind), s.s ? rat(*s.s) : Json(""), static_cast<std::uint64_t>(q), text(v)});
  }
}

Json verdict_json(const SeriesReport& s) {
  Json j;
  j["trend"] = to_string(s.verdict);
  j["tail_exponent"] = s.tail_exponent ? Json(text(*s.tail_exponent)) : Json(nullptr);
  j["analytic"] = s.analytic_verdict ? Json(to_string(*s.analytic_verdict)) : Json(nullptr);
  return j;
}

OutputRecord cmd_measure(const Options& o) {
  std::optional<PsiSpec> psi = psi_of(o);
  if (!psi) throw UsageError("measure needs --psi");
  auto windows = parse_windows(o.windows);
  if (o.samples == 0) throw UsageError("--samples must be >= 1");
  std::vector<std::uint64_t> cps = series_checkpoints(o);

  OutputRecord r;
  r.provenance = kMonteCarlo;
  Table& hits = r.table("hit_fractions", {"n0", "n1", "samples", "hits", "fraction", "decimal", "words"});
  for (auto [a, b] : windows) {
    MCReport m = mc_hit_fraction(*psi, a, b, o.samples, o.seed, o.threads);
    hits.add({static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(m.samples),
              static_cast<std::uint64_t>(m.hits), rat(m.fraction), text(to_double(m.fraction)),
              static_cast<std::uint64_t>(m.max_words)});
  }
  Table& series = r.table("series", {"kind", "s", "Q", "partial_sum"});
  SeriesReport k = khintchine_series(*psi, cps, o.threads);
  add_series(series, k);
  r.summary["khintchine"] = verdict_json(k);

  std::optional<Rational> s;
  if (!o.s.empty()) {
    s = parse_rational(o.s);
  } else if (auto* f = std::get_if<PsiPower>(&psi->family)) {
    s = 1 / (1 + f->tau);
  } else if (auto* f = std::get_if<PsiTwoAdic>(&psi->family)) {
    s = 1 / (1 + f->tau);
  } else if (auto* f = std::get_if<PsiPowerLog>(&psi->family)) {
    s = 1 / (1 + f->tau);
  }
  if (s && *s < 1) {
    SeriesReport d = dodson_series(*psi, *s, cps, o.threads);
    add_series(series, d);
    r.summary["dodson"] = verdict_json(d);
  }
  r.summary["note"] = "hit fractions at finite depth are trend evidence; limsup membership is not decided";
  return r;
}

OutputRecord cmd_mtp(const Options& o) {
  if (o.tau.empty()) throw UsageError("mtp needs --tau");
  Rational tau = parse_rational(o.tau);
  if (sgn(tau) < 0) throw DomainError("tau must be >= 0");
  Rational s = o.s.empty() ? Rational(1 / (1 + tau)) : parse_rational(o.s);
  std::size_t depth = o.depth.value_or(3);
  Integer floor_q = Integer(1) << static_cast<mp_bitcnt_t>(std::max<std::size_t>(depth, 16));
  Integer q_max = qmax_or(o, floor_q);
  MtpCoverage m = mtp_coverage(tau, s, depth, q_max, o.cap);

  OutputRecord r;
  r.provenance = m.lower == m.upper ? kExact : std::string(kExact) + "; infinite family bracketed by tail regions";
  if (m.lower == 1) {
    r.summary["coverage"] = "1 (certified from below)";
  } else if (m.upper < 1) {
    r.summary["coverage"] = "< 1 (certified from above)";
  } else {
    r.summary["coverage"] = "undecided within the bracket";
  }
  r.summary["lower"] = rat(m.lower);
  r.summary["upper"] = rat(m.upper);
  r.summary["lower_decimal"] = text(to_double(m.lower));
  r.summary["upper_decimal"] = text(to_double(m.upper));
  r.summary["rounding"] = "lower rounded down, upper rounded up";
  r.summary["certified_cylinder_mass"] = rat(m.certified_cylinder_mass);
  r.summary["intervals"] = static_cast<std::uint64_t>(m.intervals);
  r.summary["tail_regions"] = static_cast<std::uint64_t>(m.tail_regions);
  r.summary["tails_certified"] = m.tails_certified;
  r.summary["hausdorff_measure"] =
      "not computed: only level coverage and the window inclusion are witnessed, not infinitude";

  // Window inclusion (P/Q, P/Q + 1/Q) inside the blow-up, over a bounded part of S.
  Integer inc_q = std::min(q_max, Integer(10000));
  std::size_t windows = 0, included = 0, cylinders = 0;
  for (const auto& t : enumerate_S(inc_q, o.cap)) {
    ++windows;
    included += blow_up_contains_window(t, tau, s);
    cylinders += blow_up_contains_cylinder(t, tau, s);
  }
  Table& t = r.table("inclusion", {"q_max", "triples", "window_inside", "cylinder_inside"});
  t.add({integer(inc_q), static_cast<std::uint64_t>(windows), static_cast<std::uint64_t>(included),
         static_cast<std::uint64_t>(cylinders)});
  return r;
}

OutputRecord cmd_orders(const Options& o) {
  std::optional<PsiSpec> psi = psi_of(o);
  if (!psi) throw UsageError("orders needs --psi");
  Integer q_max = qmax_or(o, Integer(10000));
  OutputRecord r;
  r.provenance = std::string(kHighPrecision) + "; window extremes stand in for liminf/limsup";
  Table& t = r.table("orders", {"set", "q_min", "q_max", "lower", "upper", "arg_lower", "arg_upper", "points"});
  auto add = [&](const std::string& set, const OrderEstimate& e) {
    t.add({set, integer(e.q_min), integer(e.q_max), number(e.lower, o), number(e.upper, o), integer(e.arg_lower),
           integer(e.arg_upper), static_cast<std::uint64_t>(e.points)});
  };
  add("all", order_estimate(*psi, parse_integer(o.qmin, "qmin"), q_max));
  if (o.k) add("S_" + std::to_string(*o.k), lambda_order_estimate(*psi, *o.k, q_max));
  if (o.violations) {
    Table& v = r.table("monotonicity_violations", {"q", "psi_q", "psi_q_plus_1"});
    for (const auto& q : monotonicity_violations(*psi, q_max)) {
      v.add({integer(q), number(psi_eval(*psi, q, prec_of(o)), o), number(psi_eval(*psi, q + 1, prec_of(o)), o)});
    }
  }
  if (!o.s.empty()) {
    Theta th(*psi, parse_rational(o.s));
    std::size_t ones = 0, points = 0;
    std::optional<Integer> first_other;
    for (Integer q = 1; q <= q_max; ++q) {
      Number v = th(q);
      ++points;
      if (v.exact && *v.exact == 1) {
        ++ones;
      } else if (!first_other) {
        first_other = q;
      }
    }
    r.summary["theta_s"] = rat(th.s());
    r.summary["theta_points"] = static_cast<std::uint64_t>(points);
    r.summary["theta_exactly_one"] = static_cast<std::uint64_t>(ones);
    r.summary["theta_first_other"] = first_other ? integer(*first_other) : Json(nullptr);
  }
  return r;
}

// ---------------------------------------------------------------- parsing

struct Parsed {
  Options opts;
  std::string command;
  Json params;
};

void echo(Json& params, const CLI::App& app, bool skip_threads) {
  for (const CLI::Option* opt : app.get_options()) {
    std::string name = opt->get_single_name();
    if (name == "help" || name == "version" || (skip_threads && name == "threads")) continue;
    if (opt->get_expected_min() == 0) {
      params[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      params[name] = join(opt->results(), ",");
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    } else {
      params[name] = nullptr;
    }
  }
}

struct Cli {
  CLI::App app{"Lüroth expansions, approximation sets and their dimension"};
  Options o;
  std::vector<std::pair<std::string, CLI::App*>> subs;

  Cli() {
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "luroth 0.1.0");
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--out", o.out, "write to PATH instead of stdout");
    app.add_option("--seed", o.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--threads", o.threads, "worker threads (never changes output)")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    app.add_option("--qmax", o.qmax, "denominator cap");
    app.add_option("--depth", o.depth, "depth n");
    app.add_option("--precision", o.precision, "MPFR working precision in bits")
        ->check(CLI::Range(32L, 65536L))
        ->capture_default_str();

    auto* expand = sub("expand", "digits, convergents and errors of a rational x in (0,1]");
    expand->add_option("x", o.x, "rational num/den")->required();

    auto* eval = sub("eval", "value of [prefix;period], or the cylinder of a finite prefix");
    eval->add_option("digits", o.digits, "e.g. [3;4,3]")->required();

    auto* enums = sub("enum-s", "denominator triples (P, Q, d) of S up to --qmax");
    enums->add_option("--k", o.k, "restrict to depth k");
    enums->add_option("--cap", o.cap, "interval cap")->capture_default_str();

    auto* dim = sub("dim", "dimension estimates: pressure root, box counting, cover sums");
    dim->add_option("--method", o.method, "pressure, box or cover")->required();
    dim->add_option("--tau", o.tau, "rate tau");
    dim->add_option("--psi", o.psi, "psi spec");
    dim->add_option("--ms", o.ms, "grid exponents lo:hi or a list")->capture_default_str();
    dim->add_option("--mode", o.mode, "depth-union or scale-band")->capture_default_str();
    dim->add_option("--j", o.j, "2-adic weights: J for 0..J, or a list")->capture_default_str();
    dim->add_option("--margin", o.margin, "s - 1/(1+tau+j)")->capture_default_str();
    dim->add_option("--threshold", o.threshold, "cover sum level")->capture_default_str();
    dim->add_option("--s", o.s, "fixed s for a cover-sum table");

    auto* measure = sub("measure", "Monte Carlo hit fractions and series partial sums");
    measure->add_option("--psi", o.psi, "psi spec")->required();
    measure->add_option("--windows", o.windows, "depth windows N0:N1,...")->capture_default_str();
    measure->add_option("--samples", o.samples, "samples per window")->capture_default_str();
    measure->add_option("--checkpoints", o.checkpoints, "series checkpoints, comma separated");
    measure->add_option("--s", o.s, "exponent of the second series");

    auto* mtp = sub("mtp", "coverage of the blown-up depth-n rate intervals");
    mtp->add_option("--tau", o.tau, "rate tau")->required();
    mtp->add_option("--s", o.s, "blow-up exponent, default 1/(1+tau)");
    mtp->add_option("--cap", o.cap, "interval cap")->capture_default_str();

    auto* orders = sub("orders", "window orders at infinity, monotonicity and theta");
    orders->add_option("--psi", o.psi, "psi spec")->required();
    orders->add_option("--qmin", o.qmin, "window start")->capture_default_str();
    orders->add_option("--k", o.k, "also scan the depth-k denominators");
    orders->add_flag("--violations", o.violations, "list q with psi(q+1) > psi(q)");
    orders->add_option("--s", o.s, "evaluate theta_s on [1, qmax]");

    auto* report = sub("report", "run the commands listed in a JSON config");
    report->add_option("--config", o.config, "config path")->required();
  }

  CLI::App* sub(const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    subs.emplace_back(name, s);
    return s;
  }

  Parsed parse(std::vector<std::string> args) {
    std::reverse(args.begin(), args.end());
    app.parse(args);
    Parsed p;
    p.opts = o;
    p.params = Json::object();
    echo(p.params, app, true);
    for (auto& [name, s] : subs) {
      if (s->parsed()) {
        p.command = name;
        echo(p.params, *s, true);
      }
    }
    return p;
  }
};

OutputRecord execute(const std::vector<std::string>& args, bool nested, std::vector<OutputRecord>* runs);

// Config: {"runs": [{"command": NAME, "args": {KEY: VALUE, ...}}, ...]}.
// VALUE true is a bare flag; other scalars are passed as text.
std::vector<std::vector<std::string>> read_config(const std::string& path, const Options& outer) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ParseError("config must be an object");
  for (const auto& [k, v] : cfg.items()) {
    if (k != "runs") throw ParseError("unknown config key '" + k + "'");
  }
  if (!cfg.contains("runs") || !cfg["runs"].is_array()) throw ParseError("config needs a 'runs' array");
  std::vector<std::vector<std::string>> out;
  for (const auto& run : cfg["runs"]) {
    if (!run.is_object()) throw ParseError("each run must be an object");
    for (const auto& [k, v] : run.items()) {
      if (k != "command" && k != "args") throw ParseError("unknown run key '" + k + "'");
    }
    if (!run.contains("command") || !run["command"].is_string()) throw ParseError("run needs a 'command' string");
    std::string command = run["command"];
    if (command == "report") throw ParseError("report runs cannot nest");
    std::vector<std::string> args{command};
    if (run.contains("args")) {
      if (!run["args"].is_object()) throw ParseError("'args' must be an object");
      for (const auto& [k, v] : run["args"].items()) {
        bool positional = k == "x" || k == "digits";
        if (v.is_boolean()) {
          if (v.get<bool>()) args.push_back("--" + k);
          continue;
        }
        if (!positional) args.push_back("--" + k);
        args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
    // Globals not set by the run come from the report invocation.
    auto inherit = [&](const char* key, const std::string& value) {
      if (run.contains("args") && run["args"].contains(key)) return;
      args.push_back(std::string("--") + key);
      args.push_back(value);
    };
    inherit("format", outer.format);
    inherit("seed", std::to_string(outer.seed));
    inherit("threads", std::to_string(outer.threads));
    inherit("precision", std::to_string(outer.precision));
    out.push_back(std::move(args));
  }
  return out;
}

OutputRecord dispatch(const Parsed& p, std::vector<OutputRecord>* runs) {
  const Options& o = p.opts;
  OutputRecord r;
  if (p.command == "expand") r = cmd_expand(o);
  if (p.command == "eval") r = cmd_eval(o);
  if (p.command == "enum-s") r = cmd_enum_s(o);
  if (p.command == "dim") r = cmd_dim(o);
  if (p.command == "measure") r = cmd_measure(o);
  if (p.command == "mtp") r = cmd_mtp(o);
  if (p.command == "orders") r = cmd_orders(o);
  if (p.command == "report") {
    r.provenance = "composite: see each run";
    for (const auto& args : read_config(o.config, o)) runs->push_back(execute(args, true, nullptr));
    r.summary["runs"] = static_cast<std::uint64_t>(runs->size());
  }
  r.command = p.command;
  r.params = p.params;
  return r;
}

OutputRecord execute(const std::vector<std::string>& args, bool nested, std::vector<OutputRecord>* runs) {
  Cli cli;
  Parsed p = cli.parse(args);
  if (nested && p.command == "report") throw ParseError("report runs cannot nest");
  return dispatch(p, runs);
}

void emit(std::ostream& os, const std::string& format, const OutputRecord& r, const std::vector<OutputRecord>& runs) {
  if (format == "csv") {
    write_csv(os, r);
    for (const auto& run : runs) {
      os << '\n';
      write_csv(os, run);
    }
    return;
  }
  Json j = to_json(r);
  if (r.command == "report") {
    Json records = Json::array();
    for (const auto& run : runs) records.push_back(to_json(run));
    j["records"] = std::move(records);
  }
  write_json(os, j);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli;
  try {
    Parsed p = cli.parse(args);
    std::vector<OutputRecord> runs;
    OutputRecord r = dispatch(p, &runs);
    if (p.opts.out.empty()) {
      emit(out, p.opts.format, r, runs);
    } else {
      std::ofstream file(p.opts.out, std::ios::binary);
      if (!file) throw UsageError("cannot write " + p.opts.out);
      emit(file, p.opts.format, r, runs);
    }
    return kOk;
  } catch (const CLI::Success& e) {
    return cli.app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceCapExceeded& e) {
    err << "resource cap exceeded: " << e.what() << '\n';
    return kResourceCap;
  } catch (const DivergentParameter& e) {
    err << "divergent parameter: " << e.what() << '\n';
    return kDomain;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace luroth::cli
