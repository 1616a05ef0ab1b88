#include "capest/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "capest/estimate.hpp"
#include "capest/rng.hpp"
#include "capest/time.hpp"

namespace capest {

void DemandConfig::validate() const {
  if (!(floor > 0.0) || !(floor <= ceiling)) {
    throw std::invalid_argument("demand bounds must satisfy 0 < floor <= ceiling");
  }
  // Intensities are positive integer counts; the floor must not round away.
  if (std::llround(floor) < 1) {
    throw std::invalid_argument("demand floor must round to at least one PCE per minute");
  }
  if (mean < floor || mean > ceiling) {
    throw std::invalid_argument("demand mean must lie within the bounds");
  }
  if (volatility < 0.0) throw std::invalid_argument("volatility must be non-negative");
  if (reversion < 0.0 || reversion > 1.0) {
    throw std::invalid_argument("reversion must lie in [0, 1]");
  }
  if (start && (*start < floor || *start > ceiling)) {
    throw std::invalid_argument("demand start must lie within the bounds");
  }
}

SynthResult synth_observations(const SynthConfig& config, std::uint64_t seed) {
  config.demand.validate();
  if (config.window_minutes < 1 || config.eval_step_minutes < 1) {
    throw std::invalid_argument("interval lengths must be at least one minute");
  }
  if (config.duration_minutes < config.window_minutes) {
    throw std::invalid_argument("duration must cover at least one window");
  }
  if (config.congestion_skip_minutes < 0) {
    throw std::invalid_argument("congestion skip must be non-negative");
  }

  Rng rng(seed);
  const int duration = config.duration_minutes;
  const int ta = config.window_minutes;
  const int tf = config.eval_step_minutes;

  // Per-minute demand first, so the trial stream is independent of the
  // breakdown pattern.
  std::vector<int> minute_pce(static_cast<std::size_t>(duration));
  double level = config.demand.start.value_or(config.demand.mean);
  for (int t = 0; t < duration; ++t) {
    minute_pce[static_cast<std::size_t>(t)] =
        static_cast<int>(std::llround(level));
    level += config.demand.reversion * (config.demand.mean - level) +
             config.demand.volatility * rng.next_normal();
    level = std::clamp(level, config.demand.floor, config.demand.ceiling);
  }

  SynthResult result;
  ObservationSet& out = result.observations;
  out.window_minutes = ta;
  out.eval_step_minutes = tf;

  int t = ta;
  while (t < duration) {
    int intensity = 0;
    for (int k = t - ta; k < t; ++k) intensity += minute_pce[static_cast<std::size_t>(k)];
    const double f = weibull_cdf(config.truth, static_cast<double>(intensity));
    if (rng.next_unit() < f) {
      out.observations.push_back({intensity, true, kSynthEpoch + t * kMillisPerMinute});
      result.events.push_back({t, intensity});
      // Skip the congestion span, then let the window refill with fresh
      // minutes, as the classifier's discard rules would.
      int next = t + config.congestion_skip_minutes + ta;
      next += (tf - (next - ta) % tf) % tf;
      t = next;
    } else {
      out.observations.push_back({intensity, false, kSynthEpoch + t * kMillisPerMinute});
      t += tf;
    }
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

std::optional<double> simulate_time_to_breakdown(
    std::span<const PlanSegment> plan, const CapacityModel& model,
    std::uint64_t seed) {
  if (plan.empty()) throw std::invalid_argument("intensity plan must not be empty");
  for (const PlanSegment& seg : plan) {
    if (!(seg.duration_minutes > 0.0) || seg.intensity < 0.0) {
      throw std::invalid_argument("plan segments need positive duration and non-negative intensity");
    }
  }

  Rng rng(seed);
  const double tf = static_cast<double>(model.eval_step_minutes);
  double elapsed = 0.0;
  for (const PlanSegment& seg : plan) {
    const double f = weibull_cdf(model.weibull, seg.intensity);
    if (f > 0.0) {
      const double t = rng.next_exponential(f / tf);
      if (t < seg.duration_minutes) return elapsed + t;
    }
    elapsed += seg.duration_minutes;
  }
  return std::nullopt;
}

}  // namespace capest
