// SPDX-License-Identifier: Apache-2.0

#include "luroth/limsup/enumerate.hpp"

#include <algorithm>

#include "luroth/error.hpp"

namespace luroth {

namespace {

struct Walker {
  const Integer& q_max;
  std::size_t max_depth;
  const std::function<bool(const STriple&)>& visit;
  STriple current;

  // W is the product of d(d-1) over the current digits, P the numerator of
  // the current convergent over Q.
  void descend(const Integer& W, const Integer& P, const Integer& Q) {
    std::size_t depth = current.digits.size();
    if (max_depth != 0 && depth >= max_depth) return;
    for (Digit d = 2;; ++d) {
      Integer child_Q = W * d;
      if (child_Q > q_max) break;
      Integer child_P = depth == 0 ? Integer(1) : P * (child_Q / Q) + 1;
      current.digits.push_back(d);
      current.P = child_P;
      current.Q = child_Q;
      current.d_last = d;
      current.depth = depth + 1;
      bool go_deeper = visit(current);
      Integer child_W = W * d * (d - 1);
      // The cheapest grandchild has Q = 2 * child_W.
      if (go_deeper && 2 * child_W <= q_max) descend(child_W, child_P, child_Q);
      current.digits.pop_back();
    }
  }
};

}  // namespace

void for_each_tuple(const Integer& q_max, std::size_t max_depth, const std::function<bool(const STriple&)>& visit) {
  Walker w{q_max, max_depth, visit, {}};
  w.descend(Integer(1), Integer(0), Integer(1));
}

bool s_order_less(const STriple& a, const STriple& b) {
  if (a.Q != b.Q) return a.Q < b.Q;
  if (a.depth != b.depth) return a.depth < b.depth;
  return std::lexicographical_compare(a.digits.begin(), a.digits.end(), b.digits.begin(), b.digits.end());
}

std::vector<STriple> enumerate_S(const Integer& q_max, std::size_t cap) {
  if (q_max < 2) throw DomainError("enumerate_S needs Q_max >= 2");
  std::vector<STriple> out;
  for_each_tuple(q_max, 0, [&](const STriple& t) {
    if (out.size() >= cap) throw ResourceCapExceeded("enumeration of S exceeds the cap of " + std::to_string(cap));
    out.push_back(t);
    return true;
  });
  std::sort(out.begin(), out.end(), s_order_less);
  return out;
}

std::vector<STriple> enumerate_S_k(std::size_t k, const Integer& q_max, std::size_t cap) {
  if (k == 0) throw DomainError("S_k needs k >= 1");
  Integer min_q;
  mpz_ui_pow_ui(min_q.get_mpz_t(), 2, k);
  if (q_max < min_q) throw DomainError("S_" + std::to_string(k) + " has no element below 2^" + std::to_string(k));
  std::vector<STriple> out;
  for_each_tuple(q_max, k, [&](const STriple& t) {
    if (t.depth == k) {
      if (out.size() >= cap) throw ResourceCapExceeded("enumeration of S_k exceeds the cap of " + std::to_string(cap));
      out.push_back(t);
      return false;
    }
    // A depth-k descendant needs at least Q * (d-1) * 2^(k-depth).
    Integer reach = t.Q * (t.d_last - 1);
    mpz_mul_2exp(reach.get_mpz_t(), reach.get_mpz_t(), k - t.depth);
    return reach <= q_max;
  });
  std::sort(out.begin(), out.end(), s_order_less);
  return out;
}

std::string triple_csv_header() { return "P,Q,d,depth,digits"; }

std::string triple_csv_row(const STriple& t) {
  std::string digits;
  for (std::size_t i = 0; i < t.digits.size(); ++i) {
    if (i) digits += '|';
    digits += t.digits[i].get_str();
  }
  return t.P.get_str() + "," + t.Q.get_str() + "," + t.d_last.get_str() + "," + std::to_string(t.depth) + "," + digits;
}

}  // namespace luroth
