#include <stdexcept>

#include "capest/aggregate.hpp"
#include "capest/rng.hpp"
#include "capest/time.hpp"
#include "doctest.h"

using namespace capest;

namespace {

VehicleRecord at_minute(int minute, double speed, double length = 4.2) {
  return {minute_start(minute) + 100, 1, speed, length, true};
}

std::vector<MinuteInterval> constant_minutes(int count, double speed, int pce) {
  std::vector<MinuteInterval> minutes(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    minutes[static_cast<std::size_t>(i)] = {minute_start(i), pce, pce, speed};
  }
  return minutes;
}

}  // namespace

TEST_CASE("aggregate_minutes computes harmonic mean speed") {
  // 2 / (1/60 + 1/120) = 80
  const auto minutes = aggregate_minutes({at_minute(0, 60.0), at_minute(0, 120.0)});
  REQUIRE(minutes.size() == 1);
  CHECK(minutes[0].vehicle_count == 2);
  CHECK(minutes[0].harmonic_mean_speed == doctest::Approx(80.0));
}

TEST_CASE("aggregate_minutes single record is the identity") {
  const auto minutes = aggregate_minutes({at_minute(0, 95.0)});
  REQUIRE(minutes.size() == 1);
  CHECK(minutes[0].harmonic_mean_speed == doctest::Approx(95.0));
}

TEST_CASE("aggregate_minutes counts trucks as two passenger cars") {
  const auto minutes = aggregate_minutes(
      {at_minute(0, 80.0, 10.0), at_minute(0, 90.0, 4.0), at_minute(0, 90.0, 4.0)});
  REQUIRE(minutes.size() == 1);
  CHECK(minutes[0].pce == 4);
  CHECK(minutes[0].vehicle_count == 3);
}

TEST_CASE("aggregate_minutes spans empty minutes") {
  const auto minutes = aggregate_minutes({at_minute(0, 90.0), at_minute(3, 85.0)});
  REQUIRE(minutes.size() == 4);
  CHECK(minutes[1].vehicle_count == 0);
  CHECK(minutes[1].pce == 0);
  CHECK(!minutes[1].harmonic_mean_speed);
  CHECK(minutes[1].start == minute_start(1));
  CHECK(minutes[3].harmonic_mean_speed == doctest::Approx(85.0));
}

TEST_CASE("rolling_intervals averages member means arithmetically") {
  auto minutes = constant_minutes(3, 80.0, 30);
  SUBCASE("constant speed stays exact") {
    const auto windows = rolling_intervals(minutes, 3);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].mean_speed == doctest::Approx(80.0));
    CHECK(windows[0].pce == 90);
  }
  SUBCASE("absent member minutes are skipped") {
    minutes[0].harmonic_mean_speed = 60.0;
    minutes[1].harmonic_mean_speed = 90.0;
    minutes[2].harmonic_mean_speed.reset();
    minutes[2].vehicle_count = 0;
    minutes[2].pce = 0;
    const auto windows = rolling_intervals(minutes, 3);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].mean_speed == doctest::Approx(75.0));
  }
  SUBCASE("pce sums the members") {
    minutes[0].pce = 30;
    minutes[1].pce = 35;
    minutes[2].pce = 40;
    const auto windows = rolling_intervals(minutes, 3);
    CHECK(windows[0].pce == 105);
  }
}

TEST_CASE("rolling_intervals window bookkeeping") {
  const auto minutes = constant_minutes(10, 90.0, 20);
  const auto windows = rolling_intervals(minutes, 3);
  REQUIRE(windows.size() == 8);  // no window past the data end
  for (std::size_t i = 0; i < windows.size(); ++i) {
    CHECK(windows[i].start == minutes[i].start);
    CHECK(windows[i].width_minutes == 3);
  }
  CHECK_THROWS_AS(rolling_intervals(minutes, 0), std::invalid_argument);

  auto gap = minutes;
  gap.erase(gap.begin() + 4);
  CHECK_THROWS_AS(rolling_intervals(gap, 3), std::invalid_argument);
}

TEST_CASE("harmonic mean is at most the arithmetic mean") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<VehicleRecord> records;
    double sum = 0.0;
    const int n = 2 + static_cast<int>(rng.next_u64() % 8);
    for (int i = 0; i < n; ++i) {
      const double speed = 30.0 + rng.next_unit() * 90.0;
      sum += speed;
      records.push_back(at_minute(0, speed));
    }
    const auto minutes = aggregate_minutes(records);
    REQUIRE(minutes[0].harmonic_mean_speed);
    CHECK(*minutes[0].harmonic_mean_speed <= sum / n + 1e-9);
  }
}

TEST_CASE("decimated rolling windows partition the total pce") {
  Rng rng(11);
  std::vector<MinuteInterval> minutes;
  const int width = 3;
  int total = 0;
  for (int i = 0; i < 12; ++i) {
    const int pce = static_cast<int>(rng.next_u64() % 50);
    minutes.push_back({minute_start(i), pce, pce, 90.0});
    total += pce;
  }
  const auto windows = rolling_intervals(minutes, width);
  // Consecutive windows share width-1 minutes.
  for (std::size_t i = 1; i < windows.size(); ++i) {
    CHECK(windows[i].start - windows[i - 1].start == kMillisPerMinute);
  }
  int decimated = 0;
  for (std::size_t i = 0; i < windows.size(); i += width) {
    decimated += windows[i].pce;
  }
  CHECK(decimated == total);
}
