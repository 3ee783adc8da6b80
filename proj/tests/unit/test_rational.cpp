#include "doctest.h"

#include "pac/rational.hpp"

using pac::parse_rational;
using pac::Rational;

TEST_CASE("decimals and fractions parse exactly")
{
    CHECK(parse_rational("0.345") == Rational(69, 200));
    CHECK(parse_rational("69/200") == Rational(69, 200));
    CHECK(parse_rational("138/400") == Rational(69, 200));
    CHECK(parse_rational("-1.5") == Rational(-3, 2));
    CHECK(parse_rational("2e-3") == Rational(1, 500));
    CHECK(parse_rational("7") == 7);
    CHECK(parse_rational(".5") == Rational(1, 2));
}

TEST_CASE("malformed numbers are rejected")
{
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1.2.3"), std::invalid_argument);
}

TEST_CASE("canonical and display forms")
{
    CHECK(pac::to_string(Rational(2, 4)) == "1/2");
    CHECK(pac::to_string(Rational(3)) == "3");
    CHECK(pac::to_display(Rational(69, 200)) == "0.345");
    CHECK(pac::to_display(Rational(1, 3)) == "1/3");
    CHECK(pac::to_display(Rational(-3, 2)) == "-1.5");
    CHECK(pac::to_display(Rational(0)) == "0");
}
