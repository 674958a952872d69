#include "doctest.h"
#include "pidkit/errors.hpp"
#include "pidkit/rational.hpp"

using namespace pidkit;

TEST_CASE("decimal and fraction strings parse exactly") {
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational(" -0.5 ") == Rational(-1, 2));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E+1") == Rational(25));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("0.9999") == Rational(9999, 10000));
}

TEST_CASE("malformed numbers are input errors") {
  CHECK_THROWS_AS(parse_rational(""), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("1/-2"), InputError);
  CHECK_THROWS_AS(parse_rational("0.2.5"), InputError);
  CHECK_THROWS_AS(parse_rational("."), InputError);
}

TEST_CASE("rendering and conversions") {
  CHECK(to_string(Rational(3, 6)) == "1/2");
  CHECK(to_string(Rational(4, 2)) == "2");
  CHECK(rational_from_double(0.375) == Rational(3, 8));
  CHECK(limit_denominator(rational_from_double(3.141592653589793), mpz_class(1000)) ==
        Rational(355, 113));
  CHECK(limit_denominator(Rational(3, 7), mpz_class(10)) == Rational(3, 7));
  CHECK(limit_denominator(rational_from_double(0.1875), mpz_class(1000000)) == Rational(3, 16));
}
