#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgame/rational.hpp"
#include "qgame/errors.hpp"

using namespace qgame;

TEST_CASE("construction normalizes to lowest terms with positive denominator") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(6, 3).is_integer());
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("arithmetic identities") {
    Rational a(3, 7), b(-2, 5);
    CHECK(a + b == Rational(1, 35));
    CHECK(a - b == Rational(29, 35));
    CHECK(a * b == Rational(-6, 35));
    CHECK(a / b == Rational(-15, 14));
    CHECK(-(-a) == a);
    CHECK(a + Rational(0) == a);
    CHECK(a * Rational(1) == a);
    CHECK_THROWS_AS(a / Rational(0), std::domain_error);
}

TEST_CASE("ordering is numeric") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(7, 1) > Rational(13, 2));
}

TEST_CASE("string round trip") {
    for (const char* s : {"0", "5", "-5", "1/2", "-7/3", "123456789123456789123456789/2"}) {
        Rational r = Rational::from_string(s);
        CHECK(r.str() == s);
    }
    CHECK(Rational::from_string("2/4").str() == "1/2");
    CHECK_THROWS_AS(Rational::from_string(""), Error);
    CHECK_THROWS_AS(Rational::from_string("1.5"), Error);
    CHECK_THROWS_AS(Rational::from_string("1/"), Error);
    CHECK_THROWS_AS(Rational::from_string("/2"), Error);
    CHECK_THROWS_AS(Rational::from_string("1/-2"), Error);
    CHECK_THROWS_AS(Rational::from_string("a"), Error);
    CHECK_THROWS_AS(Rational::from_string("1/0"), Error);
}

TEST_CASE("floor and ceil") {
    CHECK(Rational(7, 2).floor() == Rational(3));
    CHECK(Rational(7, 2).ceil() == Rational(4));
    CHECK(Rational(-7, 2).floor() == Rational(-4));
    CHECK(Rational(-7, 2).ceil() == Rational(-3));
    CHECK(Rational(4).floor() == Rational(4));
    CHECK(Rational(4).ceil() == Rational(4));
}

TEST_CASE("grid rounding") {
    Rational n(100);
    CHECK(Rational(7071, 10000).ceil_to_grid(n) == Rational(71, 100));
    CHECK(Rational(7071, 10000).floor_to_grid(n) == Rational(70, 100));
    CHECK(Rational(1, 2).ceil_to_grid(n) == Rational(1, 2));
    CHECK(Rational(1, 2).floor_to_grid(n) == Rational(1, 2));
}

TEST_CASE("mod_one lands in [0, 1)") {
    CHECK(Rational(5, 4).mod_one() == Rational(1, 4));
    CHECK(Rational(-1, 4).mod_one() == Rational(3, 4));
    CHECK(Rational(3).mod_one() == Rational(0));
}

TEST_CASE("integer lcm and roots") {
    CHECK(Rational::int_lcm(Rational(4), Rational(6)) == Rational(12));
    CHECK(Rational::int_root_floor(Rational(17), 2) == Rational(4));
    CHECK(Rational::int_root_floor(Rational(16), 2) == Rational(4));
    CHECK(Rational::int_root_floor(Rational(26), 3) == Rational(2));
    CHECK(Rational::int_root_floor(Rational(27), 3) == Rational(3));
}
