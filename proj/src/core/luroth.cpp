// SPDX-License-Identifier: Apache-2.0

#include "luroth/core/luroth.hpp"

#include <cctype>
#include <map>

#include "luroth/error.hpp"

namespace luroth {

namespace {

std::string join(const DigitList& ds) {
  std::string out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) out += ',';
    out += ds[i].get_str();
  }
  return out;
}

DigitList parse_list(std::string_view body, std::string_view whole) {
  DigitList out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string_view item = body.substr(pos, comma == std::string_view::npos ? body.npos : comma - pos);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (item.empty()) throw ParseError("empty digit in '" + std::string(whole) + "'");
    for (char c : item) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ParseError("bad digit '" + std::string(item) + "' in '" + std::string(whole) + "'");
      }
    }
    out.emplace_back(std::string(item), 10);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
    if (pos == body.size()) throw ParseError("trailing comma in '" + std::string(whole) + "'");
  }
  return out;
}

// Product of d(d-1) over a digit block.
Integer block_weight(std::span<const Digit> ds) {
  Integer w = 1;
  for (const auto& d : ds) w *= d * (d - 1);
  return w;
}

}  // namespace

std::string format_digits(const DigitSeq& seq) {
  std::string out = "[" + join(seq.prefix);
  if (seq.period) out += ";" + join(*seq.period);
  return out + "]";
}

DigitSeq parse_digits(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw ParseError("digit sequence must look like [d1,d2;p1,p2]: '" + std::string(text) + "'");
  }
  s = s.substr(1, s.size() - 2);
  DigitSeq seq;
  std::size_t semi = s.find(';');
  seq.prefix = parse_list(s.substr(0, semi), text);
  if (semi != std::string_view::npos) {
    seq.period = parse_list(s.substr(semi + 1), text);
    if (seq.period->empty()) throw ParseError("empty period in '" + std::string(text) + "'");
  }
  try {
    require_digits(seq.prefix);
    if (seq.period) require_digits(*seq.period);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return seq;
}

void require_unit_interval(const Rational& x) {
  if (sgn(x) <= 0 || x > 1) {
    throw DomainError("x must lie in (0,1], got " + format_rational(x));
  }
}

void require_digits(std::span<const Digit> digits) {
  for (const auto& d : digits) {
    if (d < 2) throw DomainError("Lüroth digits are at least 2, got " + d.get_str());
  }
}

Rational luroth_map(const Rational& x) {
  require_unit_interval(x);
  // With k = floor(1/x): T(x) = k((k+1)x - 1).
  Integer k = floor(Rational(1 / x));
  Rational y = Rational(k) * (Rational(k + 1) * x - 1);
  y.canonicalize();
  return y;
}

Digit first_digit(const Rational& x) {
  require_unit_interval(x);
  return floor(Rational(1 / x)) + 1;
}

DigitList digit_prefix(const Rational& x, std::size_t n) {
  require_unit_interval(x);
  DigitList out;
  out.reserve(n);
  Rational y = x;
  for (std::size_t i = 0; i < n; ++i) {
    Integer k = floor(Rational(1 / y));
    out.push_back(k + 1);
    y = Rational(k) * (Rational(k + 1) * y - 1);
    y.canonicalize();
  }
  return out;
}

DigitSeq digits(const Rational& x, std::size_t n, std::size_t orbit_cap) {
  if (n == 0) throw DomainError("digit count must be positive");
  require_unit_interval(x);
  std::map<Rational, std::size_t> seen;
  DigitList ds;
  Rational y = x;
  std::optional<std::size_t> cycle_start;
  std::size_t cycle_end = 0;
  for (std::size_t i = 0;; ++i) {
    if (!cycle_start && i <= orbit_cap) {
      auto [it, inserted] = seen.emplace(y, i);
      if (!inserted) {
        cycle_start = it->second;
        cycle_end = i;
        seen.clear();
      }
    }
    if (ds.size() >= n && (cycle_start || i > orbit_cap)) break;
    Integer k = floor(Rational(1 / y));
    ds.push_back(k + 1);
    y = Rational(k) * (Rational(k + 1) * y - 1);
    y.canonicalize();
  }
  DigitSeq seq;
  if (!cycle_start) {
    ds.resize(n);
    seq.prefix = std::move(ds);
    return seq;
  }
  seq.period = DigitList(ds.begin() + static_cast<std::ptrdiff_t>(*cycle_start),
                         ds.begin() + static_cast<std::ptrdiff_t>(cycle_end));
  ds.resize(std::max(n, *cycle_start));
  seq.prefix = std::move(ds);
  return seq;
}

std::vector<ConvergentTriple> convergents(std::span<const Digit> digits) {
  require_digits(digits);
  std::vector<ConvergentTriple> out;
  out.reserve(digits.size());
  Integer P = 0;
  Integer W = 1;  // product of d_i(d_i - 1) over the digits before the current one
  Integer Q_prev = 1;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const Digit& d = digits[i];
    Integer Q = W * d;
    // P_i = P_{i-1} Q_i / Q_{i-1} + 1, and Q_{i-1} divides Q_i.
    P = P * (Q / Q_prev) + 1;
    out.push_back({P, Q, d, i + 1});
    W *= d * (d - 1);
    Q_prev = Q;
  }
  return out;
}

ConvergentTriple convergent(std::span<const Digit> digits) {
  if (digits.empty()) throw DomainError("convergent needs at least one digit");
  return convergents(digits).back();
}

Rational evaluate_prefix(std::span<const Digit> digits) {
  if (digits.empty()) return Rational(0);
  return convergent(digits).value();
}

Rational evaluate(const DigitSeq& seq) {
  if (!seq.period || seq.period->empty()) {
    throw DomainError("a finite digit prefix denotes a cylinder, not a point");
  }
  require_digits(seq.prefix);
  // v = s + v / W for the periodic block: v = s W / (W - 1).
  Rational s = evaluate_prefix(*seq.period);
  Integer Wb = block_weight(*seq.period);
  Rational v = s * Rational(Wb) / Rational(Wb - 1);
  Rational result = evaluate_prefix(seq.prefix) + v / Rational(block_weight(seq.prefix));
  result.canonicalize();
  return result;
}

Cylinder cylinder(std::span<const Digit> digits) {
  ConvergentTriple t = convergent(digits);
  Cylinder c;
  c.digits.assign(digits.begin(), digits.end());
  c.left = t.value();
  c.length = make_rational(1, (t.d_last - 1) * t.Q);
  return c;
}

Rational approximation_error(const Rational& x, std::size_t n) {
  if (n == 0) throw DomainError("depth must be positive");
  DigitList ds = digit_prefix(x, n);
  Rational e = x - convergent(ds).value();
  e.canonicalize();
  return e;
}

DigitBounds digit_bounds_check(const Rational& x, std::size_t n) {
  if (n == 0) throw DomainError("depth must be positive");
  DigitList ds = digit_prefix(x, n + 1);
  ConvergentTriple t = convergent(std::span<const Digit>(ds.data(), n));
  const Digit& dn = ds[n - 1];
  const Digit& dn1 = ds[n];
  DigitBounds b;
  b.value = abs(x * Rational(t.Q) - Rational(t.P));
  b.value.canonicalize();
  b.lower = make_rational(1, (dn - 1) * dn1);
  b.upper = make_rational(1, (dn - 1) * (dn1 - 1));
  b.loose_lower = make_rational(1, dn * dn1);
  b.loose_upper = make_rational(4, dn * dn1);
  b.lower_strict = b.lower < b.value;
  b.upper_strict = b.value < b.upper;
  b.upper_weak = b.value <= b.upper;
  b.loose_lower_strict = b.loose_lower < b.value;
  b.loose_lower_weak = b.loose_lower <= b.value;
  b.loose_upper_strict = b.value < b.loose_upper;
  b.loose_upper_weak = b.value <= b.loose_upper;
  return b;
}

}  // namespace luroth
