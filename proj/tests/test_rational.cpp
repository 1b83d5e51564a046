#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "composynth/gen.hpp"
#include "composynth/rational.hpp"

using namespace composynth;

TEST_CASE("arithmetic is exact and canonical") {
  Rational a(1, 3), b(2, 5);
  CHECK((a + b).str() == "11/15");
  CHECK((a * b).str() == "2/15");
  CHECK((a - a).str() == "0");
  CHECK((Rational(2, 4)).str() == "1/2");
  CHECK((Rational(-1, -2)).str() == "1/2");
  CHECK((Rational(1, -2)).str() == "-1/2");
  CHECK(Rational(7, 1).str() == "7");
}

TEST_CASE("comparisons") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(2, 6) == Rational(1, 3));
  CHECK(Rational(0) <= Rational(0));
  CHECK(Rational(5, 3) > Rational(1));
}

TEST_CASE("parse and print round-trip") {
  for (const char* s : {"0", "1", "-3", "1/2", "-7/3", "123456789123456789/2"}) {
    Rational r = Rational::parse(s);
    CHECK(Rational::parse(r.str()) == r);
    CHECK(r.str() == s);
  }
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("no overflow on long products") {
  Rational p(1);
  for (int i = 2; i < 60; ++i) p *= Rational(1, i);
  Rational q(1);
  for (int i = 2; i < 60; ++i) q *= Rational(i, 1);
  CHECK((p * q).is_one());
}

TEST_CASE("random field identities") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Rational a(rng.upto(40) - 20, 1 + rng.upto(12));
    Rational b(rng.upto(40) - 20, 1 + rng.upto(12));
    Rational c(rng.upto(40) - 20, 1 + rng.upto(12));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) - b == a);
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}
