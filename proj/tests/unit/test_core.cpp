#include <doctest.h>

#include "luroth/core/luroth.hpp"
#include "luroth/error.hpp"
#include "luroth/rational.hpp"
#include "luroth/real.hpp"
#include "oracle.hpp"

using namespace luroth;

namespace {
DigitList ds(std::initializer_list<long> v) {
  DigitList out;
  for (long d : v) out.emplace_back(d);
  return out;
}
Rational q(long a, long b = 1) { return make_rational(a, b); }
}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("27/71") == q(27, 71));
  CHECK(parse_rational("0.55") == q(11, 20));
  CHECK(parse_rational("-1.25e-3") == q(-1, 800));
  CHECK(parse_rational("6/4") == q(3, 2));
  CHECK(format_rational(q(3)) == "3/1");
  CHECK(format_rational(q(-2, 4)) == "-1/2");
  for (const char* bad : {"", "1/0", "a/2", "1/", "0.5.5", "1e", "--1"}) {
    CHECK_THROWS_AS(parse_rational(bad), ParseError);
  }
}

TEST_CASE("two-adic valuation") {
  CHECK(nu2(Integer(8)) == 3);
  CHECK(nu2(Integer(12)) == 2);
  CHECK(nu2(Integer(7)) == 0);
  CHECK_THROWS_AS(nu2(Integer(0)), DomainError);
}

TEST_CASE("exact powers") {
  CHECK(exact_pow(q(1, 4), q(1, 2)) == q(1, 2));
  CHECK(exact_pow(q(8, 27), q(-2, 3)) == q(9, 4));
  CHECK_FALSE(exact_pow(q(2), q(1, 2)).has_value());
  CHECK(compare_pow(q(2), q(1, 2), q(7, 5)) > 0);   // sqrt 2 > 1.4
  CHECK(compare_pow(q(2), q(1, 2), q(71, 50)) < 0); // sqrt 2 < 1.42
  CHECK(compare_pow(q(9), q(1, 2), q(3)) == 0);
}

TEST_CASE("map and first digit") {
  CHECK(luroth_map(q(27, 71)) == q(20, 71));
  CHECK(luroth_map(q(1)) == q(1));
  CHECK(luroth_map(q(1, 2)) == q(1));
  CHECK(first_digit(q(27, 71)) == 3);
  CHECK(first_digit(q(1)) == 2);
  CHECK(first_digit(q(3, 10)) == 4);
  CHECK_THROWS_AS(luroth_map(q(0)), DomainError);
  CHECK_THROWS_AS(first_digit(q(5, 3)), DomainError);
  CHECK_THROWS_AS(first_digit(q(-1, 3)), DomainError);
}

TEST_CASE("digits with period detection") {
  DigitSeq a = digits(q(27, 71), 4);
  CHECK(DigitList(a.prefix.begin(), a.prefix.begin() + 4) == ds({3, 4, 3, 4}));
  REQUIRE(a.period);
  CHECK(*a.period == ds({3, 4}));
  CHECK(evaluate(a) == q(27, 71));

  DigitSeq b = digits(q(1), 5);
  CHECK(DigitList(b.prefix.begin(), b.prefix.begin() + 5) == ds({2, 2, 2, 2, 2}));
  CHECK(*b.period == ds({2}));

  DigitSeq c = digits(q(1, 2), 3);
  CHECK(DigitList(c.prefix.begin(), c.prefix.begin() + 3) == ds({3, 2, 2}));
  CHECK(*c.period == ds({2}));
  CHECK(luroth_map(luroth_map(q(27, 71))) == q(27, 71));
}

TEST_CASE("digit text round trip") {
  DigitSeq s{ds({3}), ds({4, 3})};
  CHECK(format_digits(s) == "[3;4,3]");
  CHECK(parse_digits("[3;4,3]") == s);
  CHECK(parse_digits("[;2]") == DigitSeq{{}, ds({2})});
  CHECK_THROWS_AS(parse_digits("[1,2]"), ParseError);
  CHECK_THROWS_AS(require_digits(ds({1, 2})), DomainError);
  CHECK_THROWS_AS(parse_digits("3,4"), ParseError);
}

TEST_CASE("convergents") {
  CHECK(convergent(ds({2})) == ConvergentTriple{Integer(1), Integer(2), Integer(2), 1});
  CHECK(convergent(ds({3, 4})) == ConvergentTriple{Integer(9), Integer(24), Integer(4), 2});
  CHECK(convergent(ds({3, 4, 3})) == ConvergentTriple{Integer(82), Integer(216), Integer(3), 3});
  auto all = convergents(ds({3, 4, 3}));
  REQUIRE(all.size() == 3);
  CHECK(all[1] == convergent(ds({3, 4})));
}

TEST_CASE("evaluation") {
  CHECK(evaluate(DigitSeq{{}, ds({2})}) == 1);
  CHECK(evaluate(DigitSeq{ds({3}), ds({2})}) == q(1, 2));
  CHECK(evaluate(DigitSeq{{}, ds({3, 4})}) == q(27, 71));
  CHECK_THROWS_AS(evaluate(DigitSeq{ds({3}), std::nullopt}), DomainError);
}

TEST_CASE("cylinders") {
  Cylinder a = cylinder(ds({2}));
  CHECK(a.left == q(1, 2));
  CHECK(a.length == q(1, 2));
  Cylinder b = cylinder(ds({3, 4}));
  CHECK(b.left == q(3, 8));
  CHECK(b.length == q(1, 72));
  CHECK(b.contains(q(27, 71)));
  CHECK_FALSE(b.contains(q(3, 8)));
  CHECK(b.contains(b.right()));
}

TEST_CASE("approximation error and digit bounds") {
  CHECK(approximation_error(q(27, 71), 1) == q(10, 213));
  CHECK(approximation_error(q(27, 71), 2) == q(3, 568));
  for (std::size_t n = 1; n <= 6; ++n) {
    Rational expected = make_rational(1, Integer(1) << static_cast<mp_bitcnt_t>(n));
    CHECK(approximation_error(q(1), n) == expected);
  }
  DigitBounds b = digit_bounds_check(q(27, 71), 1);
  CHECK(b.value == q(10, 71));
  CHECK(b.lower == q(1, 8));
  CHECK(b.upper == q(1, 6));
  CHECK(b.lower_strict);
  CHECK(b.upper_strict);

  DigitBounds one = digit_bounds_check(q(1), 3);
  CHECK(one.value == 1);
  CHECK(one.value == one.upper);
  CHECK_FALSE(one.upper_strict);
  CHECK(one.upper_weak);

  DigitBounds half = digit_bounds_check(q(1, 2), 1);
  CHECK(half.value == q(1, 2));
  CHECK(half.value == half.upper);
}

TEST_CASE("library agrees with the oracle on a random corpus") {
  for (const auto& x : oracle::corpus(300, 11)) {
    DigitList lib = digit_prefix(x, 12);
    auto ref = oracle::digits(x, 12);
    REQUIRE(lib.size() == ref.size());
    for (std::size_t i = 0; i < lib.size(); ++i) CHECK(lib[i] == ref[i]);
    auto lc = convergents(lib);
    auto rc = oracle::convergents(ref);
    for (std::size_t i = 0; i < lc.size(); ++i) {
      CHECK(lc[i].Q == rc[i].Q);
      CHECK(lc[i].P == rc[i].P);
      CHECK(lc[i].value() == rc[i].value);
      Rational err = x - lc[i].value();
      CHECK(err > 0);
      CHECK(err <= make_rational(1, (lc[i].d_last - 1) * lc[i].Q));
    }
  }
}

TEST_CASE("cylinder right end is the all-2 continuation") {
  for (const auto& x : oracle::corpus(50, 5)) {
    DigitList p = digit_prefix(x, 4);
    auto ref = oracle::digits(x, 4);
    CHECK(cylinder(p).right() == oracle::evaluate_tail_twos(ref));
    CHECK(cylinder(p).contains(x));
  }
}

TEST_CASE("real enclosures") {
  Enclosure third = Enclosure::of(q(1, 3), 64);
  CHECK(third.lo < third.hi);
  CHECK(third.contains(q(1, 3)));
  Enclosure l = log_enclosure(q(2), 128);
  CHECK(l.lo.to_double() == doctest::Approx(0.6931471805599453));
  Enclosure p = pow_enclosure(q(2), q(1, 2), 128);
  CHECK(p.lo < q(1414213563, 1000000000));
  CHECK(p.hi > q(1414213562, 1000000000));
  Number n = pow_number(q(4), q(3, 2));
  REQUIRE(n.exact);
  CHECK(*n.exact == 8);
}
