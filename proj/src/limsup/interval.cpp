// SPDX-License-Identifier: Apache-2.0

#include "luroth/limsup/interval.hpp"

#include <algorithm>

#include "luroth/error.hpp"

namespace luroth {

bool RatedInterval::contains(const Rational& x) const {
  bool after_left = left_open ? x > left : x >= left;
  bool before_right = right_open ? x < right : x <= right;
  return after_left && before_right;
}

bool subset(const RatedInterval& a, const RatedInterval& b) {
  if (a.empty()) return true;
  if (b.empty()) return false;
  bool left_ok = a.left > b.left || (a.left == b.left && (!b.left_open || a.left_open));
  bool right_ok = a.right < b.right || (a.right == b.right && (!b.right_open || a.right_open));
  return left_ok && right_ok;
}

RatedInterval intersect(const RatedInterval& a, const RatedInterval& b) {
  RatedInterval out;
  if (a.left > b.left) {
    out.left = a.left;
    out.left_open = a.left_open;
  } else if (b.left > a.left) {
    out.left = b.left;
    out.left_open = b.left_open;
  } else {
    out.left = a.left;
    out.left_open = a.left_open || b.left_open;
  }
  if (a.right < b.right) {
    out.right = a.right;
    out.right_open = a.right_open;
  } else if (b.right < a.right) {
    out.right = b.right;
    out.right_open = b.right_open;
  } else {
    out.right = a.right;
    out.right_open = a.right_open || b.right_open;
  }
  return out;
}

Rational union_measure(std::span<const RatedInterval> intervals, const RatedInterval& clip) {
  std::vector<RatedInterval> parts;
  parts.reserve(intervals.size());
  for (const auto& i : intervals) {
    RatedInterval c = intersect(i, clip);
    if (!c.empty()) parts.push_back(std::move(c));
  }
  std::sort(parts.begin(), parts.end(), [](const RatedInterval& a, const RatedInterval& b) { return a.left < b.left; });
  Rational total = 0;
  bool open_run = false;
  Rational run_left, run_right;
  for (const auto& p : parts) {
    if (open_run && p.left <= run_right) {
      if (p.right > run_right) run_right = p.right;
      continue;
    }
    if (open_run) total += run_right - run_left;
    run_left = p.left;
    run_right = p.right;
    open_run = true;
  }
  if (open_run) total += run_right - run_left;
  return total;
}

std::string interval_csv_header() { return "left,right,left_open,right_open"; }

std::string interval_csv_row(const RatedInterval& i) {
  return format_rational(i.left) + "," + format_rational(i.right) + "," + (i.left_open ? "true" : "false") + "," +
         (i.right_open ? "true" : "false");
}

RatedInterval parse_interval_csv_row(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = row.find(',', pos);
    fields.push_back(row.substr(pos, comma == std::string_view::npos ? row.npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (fields.size() != 4) throw ParseError("interval row needs 4 fields: '" + std::string(row) + "'");
  auto flag = [&](std::string_view f) {
    if (f == "true") return true;
    if (f == "false") return false;
    throw ParseError("interval openness must be true/false: '" + std::string(row) + "'");
  };
  RatedInterval i{parse_rational(fields[0]), parse_rational(fields[1]), flag(fields[2]), flag(fields[3])};
  if (i.left > i.right) throw DomainError("interval left end exceeds right end: '" + std::string(row) + "'");
  return i;
}

std::string format_interval(const RatedInterval& i) {
  return std::string(i.left_open ? "(" : "[") + format_rational(i.left) + ", " + format_rational(i.right) +
         (i.right_open ? ")" : "]");
}

}  // namespace luroth
