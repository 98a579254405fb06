// SPDX-License-Identifier: Apache-2.0

#include "luroth/psi/spec.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "luroth/error.hpp"

namespace luroth {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::map<std::string, Rational> parse_params(std::string_view body, std::string_view whole,
                                             const std::vector<std::string>& keys) {
  std::map<std::string, Rational> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string_view item = trim(body.substr(pos, comma == std::string_view::npos ? body.npos : comma - pos));
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value in psi spec '" + std::string(whole) + "'");
    std::string key(trim(item.substr(0, eq)));
    bool known = false;
    for (const auto& k : keys) known = known || k == key;
    if (!known) throw ParseError("unknown parameter '" + key + "' in psi spec '" + std::string(whole) + "'");
    if (!out.emplace(key, parse_rational(item.substr(eq + 1))).second) {
      throw ParseError("duplicate parameter '" + key + "' in psi spec '" + std::string(whole) + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  for (const auto& k : keys) {
    if (!out.count(k)) throw ParseError("missing parameter '" + k + "' in psi spec '" + std::string(whole) + "'");
  }
  return out;
}

void require_tau(const Rational& tau) {
  if (sgn(tau) < 0) throw DomainError("tau must be non-negative, got " + format_rational(tau));
}

long double log_integer(const Integer& q) {
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, q.get_mpz_t());
  return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp2) * std::log(2.0L);
}

long double to_ld(const Rational& r) { return static_cast<long double>(r.get_d()); }

// x^e over an enclosure of x > 0 and a rational e.
Enclosure pow_enclosed(const Enclosure& x, const Rational& e, mpfr_prec_t prec) {
  Enclosure ee = Enclosure::of(e, prec);
  Real lo = pow(x.lo, ee.lo, Round::down);
  Real hi = pow(x.lo, ee.lo, Round::up);
  for (const Real* b : {&x.lo, &x.hi}) {
    for (const Real* k : {&ee.lo, &ee.hi}) {
      Real d = pow(*b, *k, Round::down);
      Real u = pow(*b, *k, Round::up);
      if (d < lo) lo = d;
      if (u > hi) hi = u;
    }
  }
  return {lo, hi};
}

void require_q(const Integer& q) {
  if (q < 1) throw DomainError("psi is defined for q >= 1, got " + q.get_str());
}

}  // namespace

PsiSpec PsiSpec::power(const Rational& tau) {
  require_tau(tau);
  return {PsiPower{tau}};
}

PsiSpec PsiSpec::table(std::string path, std::map<Integer, Rational> values) {
  for (const auto& [q, v] : values) {
    if (q < 1) throw DomainError("psi table keys must be positive");
    if (sgn(v) <= 0 || v > 1) throw DomainError("psi table values must lie in (0,1], q=" + q.get_str());
  }
  return {PsiTable{std::move(path), std::make_shared<const std::map<Integer, Rational>>(std::move(values))}};
}

PsiSpec PsiSpec::parse(std::string_view text) {
  std::string_view s = trim(text);
  std::size_t colon = s.find(':');
  if (colon == std::string_view::npos) throw ParseError("psi spec needs a family prefix: '" + std::string(text) + "'");
  std::string family(trim(s.substr(0, colon)));
  std::string_view body = trim(s.substr(colon + 1));
  if (family == "table") {
    if (body.empty()) throw ParseError("table psi spec needs a path");
    std::string path(body);
    return table(path, load_psi_table(path));
  }
  if (family == "power") {
    auto p = parse_params(body, text, {"tau"});
    return power(p["tau"]);
  }
  if (family == "two-adic") {
    auto p = parse_params(body, text, {"tau"});
    require_tau(p["tau"]);
    return {PsiTwoAdic{p["tau"]}};
  }
  if (family == "power-log") {
    auto p = parse_params(body, text, {"tau", "beta"});
    require_tau(p["tau"]);
    return {PsiPowerLog{p["tau"], p["beta"]}};
  }
  if (family == "const") {
    auto p = parse_params(body, text, {"c"});
    if (sgn(p["c"]) <= 0 || p["c"] > 1) throw DomainError("const psi needs c in (0,1]");
    return {PsiConstant{p["c"]}};
  }
  throw ParseError("unknown psi family '" + family + "'");
}

std::string PsiSpec::to_string() const {
  struct Visitor {
    std::string operator()(const PsiPower& f) const { return "power:tau=" + format_rational(f.tau); }
    std::string operator()(const PsiTwoAdic& f) const { return "two-adic:tau=" + format_rational(f.tau); }
    std::string operator()(const PsiPowerLog& f) const {
      return "power-log:tau=" + format_rational(f.tau) + ",beta=" + format_rational(f.beta);
    }
    std::string operator()(const PsiConstant& f) const { return "const:c=" + format_rational(f.c); }
    std::string operator()(const PsiTable& f) const { return "table:" + f.path; }
  };
  return std::visit(Visitor{}, family);
}

std::map<Integer, Rational> load_psi_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open psi table '" + path + "'");
  std::map<Integer, Rational> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view l = trim(line);
    if (l.empty() || l.front() == '#') continue;
    std::size_t comma = l.find(',');
    if (comma == std::string_view::npos) throw ParseError(path + ":" + std::to_string(line_no) + ": expected q,psi");
    std::string_view qs = trim(l.substr(0, comma));
    if (line_no == 1 && qs == "q") continue;
    Rational qr = parse_rational(qs);
    if (qr.get_den() != 1) throw ParseError(path + ":" + std::to_string(line_no) + ": q must be an integer");
    Rational v = parse_rational(trim(l.substr(comma + 1)));
    if (!values.emplace(qr.get_num(), v).second) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": duplicate q");
    }
  }
  return values;
}

Number psi_eval(const PsiSpec& spec, const Integer& q, mpfr_prec_t prec) {
  require_q(q);
  if (auto* f = std::get_if<PsiPower>(&spec.family)) return pow_number(Rational(q), -f->tau, prec);
  if (auto* f = std::get_if<PsiTwoAdic>(&spec.family)) {
    return pow_number(Rational(q), -(f->tau + Rational(nu2(q))), prec);
  }
  if (auto* f = std::get_if<PsiConstant>(&spec.family)) return Number::of(f->c, prec);
  if (auto* f = std::get_if<PsiTable>(&spec.family)) {
    auto it = f->values->find(q);
    if (it == f->values->end()) throw DomainError("psi table '" + f->path + "' has no entry for q=" + q.get_str());
    return Number::of(it->second, prec);
  }
  const auto& f = std::get<PsiPowerLog>(spec.family);
  if (sgn(f.tau) == 0 && sgn(f.beta) == 0) return Number::of(Rational(1), prec);
  Enclosure log_term = pow_enclosed(log_enclosure(Rational(q + 1), prec), -f.beta, prec);
  Enclosure value = mul_nonneg(pow_enclosure(Rational(q), -f.tau, prec), log_term);
  if (value.lo >= Rational(1)) return Number::of(Rational(1), prec);
  if (value.hi > Rational(1)) value.hi = Real(Rational(1), Round::up, prec);
  return Number::of(std::move(value));
}

int compare_with_psi(const PsiSpec& spec, const Integer& q, const Rational& v) {
  require_q(q);
  if (sgn(v) <= 0) return -1;
  if (auto* f = std::get_if<PsiPower>(&spec.family)) return -compare_pow(Rational(q), -f->tau, v);
  if (auto* f = std::get_if<PsiTwoAdic>(&spec.family)) {
    return -compare_pow(Rational(q), -(f->tau + Rational(nu2(q))), v);
  }
  for (mpfr_prec_t prec = Real::kDefaultPrecision; prec <= (1 << 16); prec *= 4) {
    Number psi = psi_eval(spec, q, prec);
    if (auto c = compare(Number::of(v, prec), psi)) return *c;
  }
  throw ResourceCapExceeded("could not separate a rational from psi(" + q.get_str() + ")");
}

long double log_psi(const PsiSpec& spec, const Integer& q) {
  require_q(q);
  if (auto* f = std::get_if<PsiPower>(&spec.family)) return -to_ld(f->tau) * log_integer(q);
  if (auto* f = std::get_if<PsiTwoAdic>(&spec.family)) {
    return -(to_ld(f->tau) + static_cast<long double>(nu2(q))) * log_integer(q);
  }
  if (auto* f = std::get_if<PsiConstant>(&spec.family)) {
    return log_enclosure(f->c, 80).mid().to_double();
  }
  if (auto* f = std::get_if<PsiPowerLog>(&spec.family)) {
    long double l = -to_ld(f->tau) * log_integer(q) - to_ld(f->beta) * std::log(log_integer(q + 1));
    return l < 0 ? l : 0.0L;
  }
  Number v = psi_eval(spec, q, 80);
  return log_enclosure(*v.exact, 80).mid().to_double();
}

}  // namespace luroth
