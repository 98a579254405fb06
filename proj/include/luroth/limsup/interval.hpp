// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "luroth/rational.hpp"

namespace luroth {

struct RatedInterval {
  Rational left;
  Rational right;
  bool left_open = true;
  bool right_open = false;

  static RatedInterval open(const Rational& a, const Rational& b) { return {a, b, true, true}; }
  static RatedInterval closed(const Rational& a, const Rational& b) { return {a, b, false, false}; }
  // (a, b], the shape of a cylinder.
  static RatedInterval half_open(const Rational& a, const Rational& b) { return {a, b, true, false}; }

  bool empty() const { return left > right || (left == right && (left_open || right_open)); }
  Rational length() const { return empty() ? Rational(0) : Rational(right - left); }
  bool contains(const Rational& x) const;

  friend bool operator==(const RatedInterval&, const RatedInterval&) = default;
};

// a is a subset of b, openness respected.
bool subset(const RatedInterval& a, const RatedInterval& b);
RatedInterval intersect(const RatedInterval& a, const RatedInterval& b);

// Lebesgue measure of the union of `intervals` inside `clip`.
Rational union_measure(std::span<const RatedInterval> intervals, const RatedInterval& clip);

// inner is a subset of the true interval, which is a subset of outer. The two
// coincide when the endpoints are rational.
struct IntervalBracket {
  RatedInterval inner;
  RatedInterval outer;

  bool exact() const { return inner == outer; }
  static IntervalBracket of(const RatedInterval& i) { return {i, i}; }
};

// CSV row `left,right,left_open,right_open`.
std::string interval_csv_header();
std::string interval_csv_row(const RatedInterval& i);
RatedInterval parse_interval_csv_row(std::string_view row);

// "(a,b]" style text with num/den endpoints.
std::string format_interval(const RatedInterval& i);

}  // namespace luroth
