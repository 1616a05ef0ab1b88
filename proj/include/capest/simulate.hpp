#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "capest/types.hpp"

namespace capest {

/// Mean-reverting random walk for the per-minute PCE demand.
struct DemandConfig {
  double mean = 26.0;
  double volatility = 2.0;   // noise standard deviation per minute
  double reversion = 0.05;   // pull toward the mean per minute, in [0, 1]
  double floor = 5.0;        // clamp bounds, must be positive
  double ceiling = 60.0;
  std::optional<double> start;  // defaults to mean

  void validate() const;
};

struct SynthConfig {
  WeibullParams truth;
  DemandConfig demand;
  int duration_minutes = 10'000;
  int window_minutes = 3;
  int eval_step_minutes = 1;
  int congestion_skip_minutes = 15;  // discarded after each breakdown
};

/// Synthetic timestamps count minutes from this fixed instant.
constexpr Millis kSynthEpoch = 946'684'800'000;  // 2000-01-01T00:00:00Z

struct BreakdownEvent {
  int minute = 0;
  int intensity = 0;
};

struct SynthResult {
  ObservationSet observations;
  std::vector<BreakdownEvent> events;
};

/// Draws a synthetic observation set from a known capacity
/// distribution: a per-minute demand series, one Bernoulli failure
/// trial per evaluation minute with the trailing-window breakdown
/// probability, and a discarded congestion span after each breakdown,
/// mirroring how classified real data is structured. Fully
/// deterministic per seed.
SynthResult synth_observations(const SynthConfig& config, std::uint64_t seed);

struct PlanSegment {
  double intensity = 0.0;
  double duration_minutes = 0.0;
};

/// Samples a time to breakdown over a piecewise-constant intensity
/// plan. Each segment draws an exponential time with rate F(I) per
/// eval step; a fresh draw starts each segment. Returns the absolute
/// breakdown time in minutes, or nullopt when every segment survives.
/// Throws std::invalid_argument on an empty plan.
std::optional<double> simulate_time_to_breakdown(
    std::span<const PlanSegment> plan, const CapacityModel& model,
    std::uint64_t seed);

}  // namespace capest
