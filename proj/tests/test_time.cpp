#include "doctest.h"

#include "fxscale/errors.hpp"
#include "fxscale/time.hpp"

#include "oracles.hpp"

using namespace fxscale;

TEST_SUITE("time") {

TEST_CASE("iso8601 round trip") {
  UtcMillis t;
  REQUIRE(parse_iso8601("2008-08-03T08:38:00.000Z", t));
  CHECK(format_iso8601(t) == "2008-08-03T08:38:00.000Z");

  REQUIRE(parse_iso8601("1970-01-01T00:00:00.000Z", t));
  CHECK(t.ms == 0);

  REQUIRE(parse_iso8601("2008-08-03T08:38:00.123Z", t));
  CHECK(t.ms % 1000 == 123);
}

TEST_CASE("fractional second variants") {
  UtcMillis a, b, c;
  REQUIRE(parse_iso8601("2020-02-29T12:00:00Z", a));       // leap day, no frac
  REQUIRE(parse_iso8601("2020-02-29T12:00:00.5Z", b));     // one digit
  REQUIRE(parse_iso8601("2020-02-29T12:00:00.500100Z", c));  // truncated to ms
  CHECK(b.ms - a.ms == 500);
  CHECK(c.ms == b.ms);
}

TEST_CASE("malformed timestamps are rejected") {
  UtcMillis t;
  CHECK_FALSE(parse_iso8601("2008-08-03 08:38:00.000Z", t));  // space not T
  CHECK_FALSE(parse_iso8601("2008-08-03T08:38:00.000", t));   // missing Z
  CHECK_FALSE(parse_iso8601("2008-13-03T08:38:00.000Z", t));  // month 13
  CHECK_FALSE(parse_iso8601("2008-02-30T08:38:00.000Z", t));  // Feb 30
  CHECK_FALSE(parse_iso8601("2019-02-29T00:00:00.000Z", t));  // not a leap year
  CHECK_FALSE(parse_iso8601("2008-08-03T24:00:00.000Z", t));  // hour 24
  CHECK_FALSE(parse_iso8601("2008-08-03T08:38:00.Z", t));     // empty fraction
}

TEST_CASE("civil date round trip across eras") {
  for (std::int64_t d : {-719468L, -1L, 0L, 1L, 11016L, 14094L, 20000L}) {
    CHECK(days_from_civil(civil_from_days(d)) == d);
  }
  const CivilDate d = civil_from_days(days_from_civil(CivilDate{2008, 8, 3}));
  CHECK(d.year == 2008);
  CHECK(d.month == 8);
  CHECK(d.day == 3);
}

TEST_CASE("weekday agrees with an independent congruence") {
  // 2008-08-03 was a Sunday.
  UtcMillis t;
  REQUIRE(parse_iso8601("2008-08-03T00:00:00.000Z", t));
  CHECK(weekday_of(t) == 0);
  CHECK(oracle::weekday(2008, 8, 3) == 0);

  for (int probe = 0; probe < 60; ++probe) {
    const std::int64_t days = probe * 97 + 3;
    const CivilDate cd = civil_from_days(days);
    CHECK(weekday_of(UtcMillis{days * kMillisPerDay}) ==
          oracle::weekday(cd.year, cd.month, cd.day));
  }
}

TEST_CASE("parse_time_arg accepts bare dates") {
  const UtcMillis t = parse_time_arg("2008-08-03");
  CHECK(format_iso8601(t) == "2008-08-03T00:00:00.000Z");
  CHECK_THROWS_AS(parse_time_arg("yesterday"), Error);
}

}  // TEST_SUITE
