#include "capest/aggregate.hpp"

#include <algorithm>
#include <stdexcept>

#include "capest/ingest.hpp"
#include "capest/time.hpp"

namespace capest {

std::vector<MinuteInterval> aggregate_minutes(
    const std::vector<VehicleRecord>& records) {
  if (records.empty()) return {};

  auto [lo, hi] = std::minmax_element(
      records.begin(), records.end(),
      [](const VehicleRecord& a, const VehicleRecord& b) {
        return a.timestamp < b.timestamp;
      });
  const std::int64_t first = minute_index(lo->timestamp);
  const std::int64_t last = minute_index(hi->timestamp);

  std::vector<MinuteInterval> minutes(static_cast<std::size_t>(last - first + 1));
  std::vector<double> inv_speed_sum(minutes.size(), 0.0);
  for (std::size_t i = 0; i < minutes.size(); ++i) {
    minutes[i].start = minute_start(first + static_cast<std::int64_t>(i));
  }
  for (const VehicleRecord& rec : records) {
    const auto i = static_cast<std::size_t>(minute_index(rec.timestamp) - first);
    minutes[i].vehicle_count += 1;
    minutes[i].pce += pce_of(rec);
    inv_speed_sum[i] += 1.0 / rec.speed_kmh;
  }
  for (std::size_t i = 0; i < minutes.size(); ++i) {
    if (minutes[i].vehicle_count > 0) {
      minutes[i].harmonic_mean_speed = minutes[i].vehicle_count / inv_speed_sum[i];
    }
  }
  return minutes;
}

std::vector<AggregatedInterval> rolling_intervals(
    const std::vector<MinuteInterval>& minutes, int width_minutes) {
  if (width_minutes < 1) {
    throw std::invalid_argument("window width must be at least one minute");
  }
  for (std::size_t i = 1; i < minutes.size(); ++i) {
    if (minutes[i].start != minutes[i - 1].start + kMillisPerMinute) {
      throw std::invalid_argument("minute series must be contiguous and ordered");
    }
  }

  std::vector<AggregatedInterval> windows;
  const auto width = static_cast<std::size_t>(width_minutes);
  if (minutes.size() < width) return windows;
  windows.reserve(minutes.size() - width + 1);
  for (std::size_t s = 0; s + width <= minutes.size(); ++s) {
    AggregatedInterval w;
    w.start = minutes[s].start;
    w.width_minutes = width_minutes;
    double speed_sum = 0.0;
    int speed_count = 0;
    for (std::size_t k = s; k < s + width; ++k) {
      w.pce += minutes[k].pce;
      if (minutes[k].harmonic_mean_speed) {
        speed_sum += *minutes[k].harmonic_mean_speed;
        ++speed_count;
      }
    }
    if (speed_count > 0) w.mean_speed = speed_sum / speed_count;
    windows.push_back(w);
  }
  return windows;
}

}  // namespace capest
