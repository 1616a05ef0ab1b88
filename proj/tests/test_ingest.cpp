#include <sstream>

#include "capest/ingest.hpp"
#include "capest/rng.hpp"
#include "capest/time.hpp"
#include "doctest.h"

using namespace capest;

namespace {

VehicleRecord rec(Millis ts, int lane, double speed, double length, bool valid = true) {
  return {ts, lane, speed, length, valid};
}

}  // namespace

TEST_CASE("parse_events maps well-formed rows directly") {
  std::istringstream in(
      "timestamp,lane,speed_kmh,length_m,valid\n"
      "2016-10-03T07:15:02.120,1,94.3,4.2,1\n");
  const ParseResult r = parse_events(in);
  REQUIRE(r.records.size() == 1);
  CHECK(r.rows_malformed == 0);
  const VehicleRecord& v = r.records[0];
  CHECK(v.timestamp == 1475478902120LL);
  CHECK(v.lane == 1);
  CHECK(v.speed_kmh == doctest::Approx(94.3));
  CHECK(v.length_m == doctest::Approx(4.2));
  CHECK(v.valid);
}

TEST_CASE("parse_events accepts an empty file with a valid header") {
  std::istringstream in("timestamp,lane,speed_kmh,length_m,valid\n");
  const ParseResult r = parse_events(in);
  CHECK(r.records.empty());
  CHECK(r.rows_total == 0);
}

TEST_CASE("parse_events counts malformed rows instead of dropping them silently") {
  std::istringstream in(
      "timestamp,lane,speed_kmh,length_m,valid\n"
      "2016-10-03T07:15:02.120,1,-5,4.2,1\n"
      "2016-10-03T07:15:03.000,1,80.0,4.2,1\n"
      "not-a-timestamp,1,80.0,4.2,1\n"
      "2016-10-03T07:15:04.000,1,80.0,4.2,2\n");
  const ParseResult r = parse_events(in);
  CHECK(r.records.size() == 1);
  CHECK(r.rows_total == 4);
  CHECK(r.rows_malformed == 3);
  CHECK(r.issues.size() == 3);
}

TEST_CASE("parse_events rejects a header with a wrong column by name") {
  std::istringstream in("timestamp,lane,speed,length_m,valid\n");
  CHECK_THROWS_WITH_AS(parse_events(in),
                       doctest::Contains("column 3"), SchemaError);
}

TEST_CASE("filter_events rejection reasons") {
  SUBCASE("two identical rows keep one") {
    const auto r = filter_events({rec(1000, 1, 90.0, 4.2), rec(1000, 1, 90.0, 4.2)});
    CHECK(r.kept.size() == 1);
    CHECK(r.rejected.duplicates == 1);
  }
  SUBCASE("detector-invalid records are dropped") {
    const auto r = filter_events({rec(1000, 1, 90.0, 4.2, false)});
    CHECK(r.kept.empty());
    CHECK(r.rejected.invalid == 1);
  }
  SUBCASE("speeds above the cap are implausible") {
    const auto r = filter_events({rec(1000, 1, 260.0, 4.2)}, {250.0, 30.0});
    CHECK(r.kept.empty());
    CHECK(r.rejected.implausible == 1);
  }
  SUBCASE("same timestamp but different lane is not a duplicate") {
    const auto r = filter_events({rec(1000, 1, 90.0, 4.2), rec(1000, 2, 90.0, 4.2)});
    CHECK(r.kept.size() == 2);
    CHECK(r.rejected.total() == 0);
  }
}

TEST_CASE("filter_events sorts by timestamp") {
  const auto r = filter_events({rec(3000, 1, 90.0, 4.2), rec(1000, 1, 80.0, 4.2),
                                rec(2000, 1, 85.0, 4.2)});
  REQUIRE(r.kept.size() == 3);
  CHECK(r.kept[0].timestamp == 1000);
  CHECK(r.kept[1].timestamp == 2000);
  CHECK(r.kept[2].timestamp == 3000);
}

TEST_CASE("filter_events conserves counts and is idempotent") {
  Rng rng(42);
  std::vector<VehicleRecord> records;
  for (int i = 0; i < 500; ++i) {
    VehicleRecord v;
    v.timestamp = static_cast<Millis>(rng.next_u64() % 10'000);
    v.lane = static_cast<int>(rng.next_u64() % 2);
    v.speed_kmh = rng.next_unit() * 300.0 - 10.0;
    v.length_m = rng.next_unit() * 40.0;
    v.valid = rng.next_unit() < 0.9;
    records.push_back(v);
    if (rng.next_unit() < 0.1) records.push_back(v);  // inject duplicates
  }
  const auto once = filter_events(records);
  CHECK(once.kept.size() + once.rejected.total() == records.size());

  const auto twice = filter_events(once.kept);
  CHECK(twice.rejected.total() == 0);
  REQUIRE(twice.kept.size() == once.kept.size());
  for (std::size_t i = 0; i < once.kept.size(); ++i) {
    CHECK(twice.kept[i].timestamp == once.kept[i].timestamp);
    CHECK(twice.kept[i].speed_kmh == once.kept[i].speed_kmh);
  }
}

TEST_CASE("pce_of uses the strict 9 m rule") {
  CHECK(pce_of(rec(0, 1, 90.0, 4.2)) == 1);
  CHECK(pce_of(rec(0, 1, 90.0, 16.5)) == 2);
  CHECK(pce_of(rec(0, 1, 90.0, 9.0)) == 1);
  CHECK(pce_of(rec(0, 1, 90.0, 9.001)) == 2);
}

TEST_CASE("iso8601 round trip") {
  CHECK(format_iso8601(1475478902120LL) == "2016-10-03T07:15:02.120");
  CHECK(parse_iso8601("2016-10-03T07:15:02.120") == 1475478902120LL);
  CHECK(parse_iso8601("2016-10-03T07:15:02") == 1475478902000LL);
  CHECK(parse_iso8601("2016-10-03T07:15:02.1") == 1475478902100LL);
  CHECK(parse_iso8601("2016-10-03T07:15:02.120Z") == 1475478902120LL);
  CHECK(!parse_iso8601("2016-13-03T07:15:02"));
  CHECK(!parse_iso8601("2016-10-03 07:15:02"));
  CHECK(!parse_iso8601("garbage"));
}
