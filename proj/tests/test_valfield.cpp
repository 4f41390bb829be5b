#include <clusterlens/valuation.hpp>

#include <doctest.h>

#include <random>

using namespace clusterlens;

TEST_CASE("ord_p on integers and fractions") {
  const auto c5 = ValuedContext::make(5);
  const auto c3 = ValuedContext::make(3);
  const auto c7 = ValuedContext::make(7);
  CHECK(ord_p(Rational(50), c5) == Valuation::of(2));
  CHECK(ord_p(Rational(4, 9), c3) == Valuation::of(-2));
  CHECK(ord_p(Rational(0), c7).is_infinite());
  CHECK(ord_p(Rational(-75), c5) == Valuation::of(2));
  CHECK(ord_p(Rational(7, 5), c5) == Valuation::of(-1));
}

TEST_CASE("valuation axioms on random rationals") {
  const auto ctx = ValuedContext::make(7);
  std::mt19937_64 rng(42);
  auto random_rational = [&]() {
    const long long num = static_cast<long long>(rng() % 20000) - 10000;
    const long long den = 1 + static_cast<long long>(rng() % 500);
    return Rational(num, den);
  };
  int checked = 0;
  while (checked < 1000) {
    const Rational a = random_rational();
    const Rational b = random_rational();
    if (a == 0 || b == 0) continue;
    ++checked;
    const auto va = ord_p(a, ctx);
    const auto vb = ord_p(b, ctx);
    CHECK(ord_p(a * b, ctx) == va + vb);
    const auto vsum = ord_p(a + b, ctx);
    const auto lo = std::min(va, vb);
    CHECK(vsum >= lo);
    if (!(va == vb)) CHECK(vsum == lo);
    // canonical form is maintained by arithmetic
    const Rational s = a + b;
    CHECK(boost::multiprecision::denominator(s) > 0);
    CHECK(boost::multiprecision::gcd(boost::multiprecision::numerator(s),
                                     boost::multiprecision::denominator(s)) == 1);
  }
}

TEST_CASE("primality checking") {
  CHECK_NOTHROW(ValuedContext::make(2));
  CHECK_NOTHROW(ValuedContext::make(3));
  CHECK_NOTHROW(ValuedContext::make(1000003));
  CHECK_NOTHROW(ValuedContext::make(BigInt("18446744073709551557")));  // > 2^64 - 59
  CHECK_THROWS_AS(ValuedContext::make(1), InputError);
  CHECK_THROWS_AS(ValuedContext::make(561), InputError);  // Carmichael
  CHECK_THROWS_AS(ValuedContext::make(BigInt("18446744073709551617")), InputError);
  CHECK(is_probable_prime(BigInt(9223372036854775783LL)));
  CHECK(!is_probable_prime(BigInt(9223372036854775781LL)));
}

TEST_CASE("extended rationals are totally ordered") {
  const ExtRational ninf = ExtRational::neg_infinity();
  const ExtRational pinf = ExtRational::pos_infinity();
  const ExtRational half(Rational(1, 2));
  const ExtRational neg(Rational(-3));
  CHECK(ninf < neg);
  CHECK(neg < half);
  CHECK(half < pinf);
  CHECK(ninf < pinf);
  CHECK(!(pinf < pinf));
  CHECK(half == ExtRational(Rational(2, 4)));
  CHECK(ninf.to_string() == "-inf");
  CHECK(pinf.to_string() == "inf");
  CHECK(half.to_string() == "1/2");
}

TEST_CASE("rational parse and print round trip") {
  CHECK(rational_to_string(rational_from_string("7/2")) == "7/2");
  CHECK(rational_to_string(rational_from_string("-8")) == "-8");
  CHECK(rational_to_string(rational_from_string("6/4")) == "3/2");
  CHECK(rational_to_string(rational_from_string("-6/-4")) == "3/2");
  CHECK_THROWS_AS(rational_from_string("1/0"), InputError);
  CHECK_THROWS_AS(rational_from_string("x"), InputError);
  CHECK(Valuation::infinity().to_string() == "inf");
  CHECK(Valuation::of(-3).to_string() == "-3");
}
