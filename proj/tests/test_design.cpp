#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "bcd/design.hpp"

using namespace bcd;

TEST_CASE("parse_rational reads fractions and decimals exactly") {
  CHECK(parse_rational("2/3") == Rational(2, 3));
  CHECK(parse_rational("0.7") == Rational(7, 10));
  CHECK(parse_rational("1") == Rational(1));
  CHECK(parse_rational("7e-1") == Rational(7, 10));
  CHECK(parse_rational("0.6667") == Rational(6667, 10000));
  CHECK(parse_rational("-1/2") == Rational(-1, 2));
  CHECK(parse_rational("4/6") == Rational(2, 3));
}

TEST_CASE("parse_rational rejects malformed text") {
  for (const char* bad : {"", "abc", "1/0", "0.7.1", "1/", "/3", "e5", "0x1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
  }
}

TEST_CASE("to_string gives canonical fractions") {
  CHECK(to_string(Rational(6, 9)) == "2/3");
  CHECK(to_string(Rational(5, 1)) == "5");
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(pow(Rational(2, 3), 0) == Rational(1));
}

TEST_CASE("DesignParams derives q and r") {
  const DesignParams params = DesignParams::parse("2/3");
  CHECK(params.has_exact());
  CHECK(params.exact_p() == Rational(2, 3));
  CHECK(params.exact_q() == Rational(1, 3));
  CHECK(params.q() == Catch::Approx(1.0 / 3.0));
  CHECK(params.r() == Catch::Approx(2.0));
  CHECK_FALSE(params.complete_randomization());

  const DesignParams half(0.5);
  CHECK(half.complete_randomization());
  CHECK(half.r() == 1.0);
  CHECK_FALSE(half.has_exact());
  CHECK_THROWS_AS(half.exact_p(), std::logic_error);

  const DesignParams one(Rational(1));
  CHECK(one.deterministic_pairs());
  CHECK(std::isinf(one.r()));
}

TEST_CASE("DesignParams rejects p outside [1/2, 1]") {
  CHECK_THROWS_AS(DesignParams(0.4), std::invalid_argument);
  CHECK_THROWS_AS(DesignParams(1.01), std::invalid_argument);
  CHECK_THROWS_AS(DesignParams(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(DesignParams::parse("1/3"), std::invalid_argument);
  CHECK_THROWS_AS(DesignParams::parse("3/2"), std::invalid_argument);
}

TEST_CASE("NumericMode guards") {
  NumericMode mode;
  CHECK(mode.overflow_for(10) == 40.0);
  mode.overflow_guard = 20.0;
  CHECK_THROWS_AS(mode.overflow_for(10), std::invalid_argument);
  CHECK(mode.overflow_for(9) == 20.0);

  const NumericMode exact = NumericMode::rational();
  CHECK(exact.exact());
  CHECK_NOTHROW(exact.require_exact(DesignParams::parse("0.7"), 40));
  CHECK_THROWS_AS(exact.require_exact(DesignParams(0.7), 10), std::invalid_argument);
  CHECK_THROWS_AS(exact.require_exact(DesignParams::parse("0.7"), exact.rational_cap + 1), std::invalid_argument);
  CHECK_THROWS_AS(NumericMode::float64().require_exact(DesignParams::parse("0.7"), 10), std::invalid_argument);
  CHECK(to_string(Backend::exact_rational) == "rational");
  CHECK(to_string(Backend::float64_stable) == "float");
}

TEST_CASE("to_double rounds to nearest") {
  CHECK(to_double(Rational(9, 10)) == 0.9);
  CHECK(to_double(Rational(7, 10)) == 0.7);
  CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(Rational(-2, 3)) == -2.0 / 3.0);
  CHECK(to_double(parse_rational("3.205")) == 3.205);
  CHECK(to_double(parse_rational("3.045")) == 3.045);
  CHECK(to_double(Rational(0)) == 0.0);
  CHECK(to_double(parse_rational("1e-310")) == 1e-310);
  CHECK(to_double(parse_rational("123456789012345678901234567890")) == 123456789012345678901234567890.0);
  CHECK(DesignParams::parse("0.9").p() == 0.9);
}
