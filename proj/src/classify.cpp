#include "capest/classify.hpp"

#include <algorithm>
#include <stdexcept>

#include "capest/time.hpp"

namespace capest {
namespace {

void check_alignment(const std::vector<MinuteInterval>& minutes,
                     const std::vector<AggregatedInterval>& windows,
                     int width, const char* what) {
  const std::size_t expected =
      minutes.size() >= static_cast<std::size_t>(width)
          ? minutes.size() - static_cast<std::size_t>(width) + 1
          : 0;
  if (windows.size() != expected) {
    throw std::invalid_argument(std::string(what) + " window count does not match the minute series");
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].start != minutes[i].start || windows[i].width_minutes != width) {
      throw std::invalid_argument(std::string(what) + " windows misaligned with the minute series");
    }
  }
}

}  // namespace

ClassifyResult classify(const std::vector<MinuteInterval>& minutes,
                        const std::vector<AggregatedInterval>& windows,
                        const std::vector<AggregatedInterval>& recovery_windows,
                        const ClassifierConfig& config) {
  config.validate();
  check_alignment(minutes, windows, config.window_minutes, "aggregation");
  check_alignment(minutes, recovery_windows, config.recovery_window, "recovery");
  for (std::size_t i = 1; i < minutes.size(); ++i) {
    if (minutes[i].start != minutes[i - 1].start + kMillisPerMinute) {
      throw std::invalid_argument("minute series must be contiguous and ordered");
    }
  }

  ClassifyResult result;
  ObservationSet& out = result.observations;
  ClassifySummary& sum = result.summary;
  out.window_minutes = config.window_minutes;
  out.eval_step_minutes = config.eval_step_minutes;

  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(minutes.size());
  const std::ptrdiff_t ta = config.window_minutes;
  const std::ptrdiff_t tr = config.recovery_window;
  const std::ptrdiff_t tf = config.eval_step_minutes;
  const std::ptrdiff_t last_window = m - ta;  // last valid window start

  auto speed_at = [&](std::ptrdiff_t t) { return minutes[static_cast<std::size_t>(t)].harmonic_mean_speed; };
  auto window_at = [&](std::ptrdiff_t s) -> const AggregatedInterval& {
    return windows[static_cast<std::size_t>(s)];
  };

  // First minute index not inside a discarded span (congestion or gap).
  std::ptrdiff_t clear_from = 0;

  for (std::ptrdiff_t t = ta; t < m; ++t) {
    if (t - ta < clear_from) continue;  // trailing window overlaps a discarded span

    const auto v = speed_at(t);
    if (!v) {
      // Data gap: discard the minute and restart the trailing window after it.
      clear_from = t + 1;
      ++sum.discarded_gap;
      continue;
    }

    bool onset = false;
    if (*v < config.breakdown_speed) {
      const std::ptrdiff_t s_lo = std::max(clear_from, t - ta + 1);
      const std::ptrdiff_t s_hi = std::min(t, last_window);
      for (std::ptrdiff_t s = s_lo; s <= s_hi; ++s) {
        const auto& w = window_at(s);
        if (w.mean_speed && *w.mean_speed < config.breakdown_speed) {
          onset = true;
          break;
        }
      }
    }

    if (onset) {
      ++sum.events;
      // Breakdown flow: the window ending right before the onset minute,
      // shifted one minute earlier when the previous minute already dipped.
      const auto prev = speed_at(t - 1);
      std::ptrdiff_t s_m = t - ta;
      if (config.queue_onset_shift && prev && *prev < config.inconclusive_speed) {
        s_m -= 1;
      }
      // A previous minute already below the breakdown threshold means the
      // detection caught up late (after a discarded span): the preceding
      // window holds congested flow, not capacity.
      bool usable = s_m >= clear_from && s_m >= 0 &&
                    !(prev && *prev < config.breakdown_speed);
      if (usable && window_at(s_m).pce < config.min_intensity) {
        usable = false;
        ++sum.discarded_low_intensity;
      }
      if (usable) {
        out.observations.push_back(
            {window_at(s_m).pce, true, minutes[static_cast<std::size_t>(t)].start});
      } else {
        ++sum.events_without_record;
      }

      // Congestion runs until a recovery window exceeds recovery_speed;
      // that confirmation window is discarded along with the congestion.
      std::ptrdiff_t r = t;
      const std::ptrdiff_t last_recovery = m - tr;
      while (r <= last_recovery) {
        const auto& w = recovery_windows[static_cast<std::size_t>(r)];
        // A hole in the data abandons the event just like a recovery does.
        if (!w.mean_speed || *w.mean_speed > config.recovery_speed) break;
        ++r;
      }
      clear_from = r <= last_recovery ? r + tr : m;
      continue;
    }

    if ((t - ta) % tf != 0) continue;  // not a failure-testing minute

    if (*v < config.inconclusive_speed) {
      ++sum.discarded_dip;
      continue;
    }
    const AggregatedInterval& w = window_at(t - ta);
    if (!w.mean_speed) {
      ++sum.discarded_gap;
      continue;
    }
    if (*w.mean_speed < config.inconclusive_speed) {
      ++sum.discarded_dip;
      continue;
    }
    if (w.pce < config.min_intensity) {
      ++sum.discarded_low_intensity;
      continue;
    }
    out.observations.push_back({w.pce, false, minutes[static_cast<std::size_t>(t)].start});
    ++sum.censored;
  }

  if (!out.observations.empty()) {
    auto [lo, hi] = std::minmax_element(
        out.observations.begin(), out.observations.end(),
        [](const Observation& a, const Observation& b) { return a.intensity < b.intensity; });
    out.intensity_min = lo->intensity;
    out.intensity_max = hi->intensity;
  }
  return result;
}

}  // namespace capest
