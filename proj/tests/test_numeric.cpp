#include <doctest.h>

#include <cmath>

#include "rookmix/errors.hpp"
#include "rookmix/numeric.hpp"

using namespace rookmix;

TEST_CASE("parse_rational accepts fractions, decimals and integers") {
  CHECK(parse_rational("1/4") == make_rational(1, 4));
  CHECK(parse_rational("3/6") == make_rational(1, 2));
  CHECK(parse_rational("0.25") == make_rational(1, 4));
  CHECK(parse_rational("0.05") == make_rational(1, 20));
  CHECK(parse_rational(".5") == make_rational(1, 2));
  CHECK(parse_rational("-0.125") == make_rational(-1, 8));
  CHECK(parse_rational("007/10") == make_rational(7, 10));
  CHECK(parse_rational("0.999") == make_rational(999, 1000));
  CHECK(parse_rational("12") == Rational(12));
}

TEST_CASE("parse_rational rejects malformed input") {
  for (const char* bad : {"", "abc", "1/0", "1e-3", "0.2.5", "/3", "1/", ".", "--1", "0x10"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), domain_error);
  }
}

TEST_CASE("format_scalar renders exact and floating values without locale") {
  CHECK(format_scalar(make_rational(7, 36)) == "7/36");
  CHECK(format_scalar(Rational(8)) == "8");
  CHECK(format_scalar(make_rational(-3, 9)) == "-1/3");
  CHECK(format_scalar(0.1) == "0.1");
  CHECK(format_scalar(0.25) == "0.25");
  const double tiny = 1.2345678901234567e-300;
  CHECK(std::stod(format_scalar(tiny)) == tiny);
}

TEST_CASE("ratio converts exact quotients into either mode") {
  CHECK(ratio<Rational>(BigInt(6), BigInt(8)) == make_rational(3, 4));
  CHECK(ratio<Rational>(BigInt(6), BigInt(8)).get_den() == 4);
  CHECK(ratio<double>(BigInt(1), BigInt(3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // Operands far outside double range still give the right quotient.
  const BigInt big = power(BigInt(10), 400);
  CHECK(ratio<double>(big * 3, big * 4) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(ratio<double>(big, power(BigInt(10), 398)) == doctest::Approx(100.0).epsilon(1e-15));
}

TEST_CASE("make_rational is canonical") {
  const Rational q = make_rational(10, -4);
  CHECK(q.get_num() == -5);
  CHECK(q.get_den() == 2);
}

TEST_CASE("binomial and power") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(2, 3) == 0);
  CHECK(binomial(500, 250) > power(BigInt(2), 490));
  CHECK(power(BigInt(3), 4) == 81);
  CHECK(integer_power<Rational>(make_rational(1, 2), 10) == make_rational(1, 1024));
  CHECK(integer_power<double>(-0.5, 3) == -0.125);
}

TEST_CASE("numeric mode names") {
  CHECK(parse_mode("exact") == NumericMode::exact);
  CHECK(parse_mode("float") == NumericMode::float64);
  CHECK(to_string(NumericMode::exact) == "exact");
  CHECK_THROWS_AS(parse_mode("double"), domain_error);
}
