#include <doctest.h>

#include <sstream>

#include "mlrules/rational.hpp"

using mlrules::Rational;

TEST_CASE("fractions are kept in lowest terms with a positive denominator") {
  const Rational r(4, -6);
  CHECK(r.num() == -2);
  CHECK(r.den() == 3);
  CHECK(Rational(0, 5) == Rational(0));
  CHECK(Rational(0, 5).den() == 1);
}

TEST_CASE("arithmetic and comparison are exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) - Rational(5, 9) == Rational(1, 9));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
  CHECK(Rational(5, 9) < Rational(2, 3));
  CHECK(Rational(2, 3) > Rational(5, 9));
  CHECK(Rational(4, 6) == Rational(2, 3));
}

TEST_CASE("zero denominators") {
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS(Rational(1) / Rational(0));
  CHECK(Rational::ratio_or_zero(3, 0) == Rational(0));
  CHECK(Rational::ratio_or_zero(3, 6) == Rational(1, 2));
}

TEST_CASE("parsing decimals and fractions") {
  CHECK(Rational::parse("0.5") == Rational(1, 2));
  CHECK(Rational::parse("2") == Rational(2));
  CHECK(Rational::parse("1/3") == Rational(1, 3));
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK(Rational::parse("-1.5") == Rational(-3, 2));
  CHECK_THROWS(Rational::parse(""));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("1.2.3"));
}

TEST_CASE("text forms") {
  CHECK(Rational(2, 3).to_string() == "2/3");
  CHECK(Rational(2).to_string() == "2");
  CHECK(Rational(1, 4).to_double() == doctest::Approx(0.25));
  std::ostringstream out;
  out << Rational(5, 12);
  CHECK(out.str() == "5/12");
  CHECK(Rational::parse(Rational(-7, 9).to_string()) == Rational(-7, 9));
}

TEST_CASE("overflow is reported, not wrapped") {
  const Rational big(std::int64_t{1} << 62, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}
