#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace capest {

/// Milliseconds since the Unix epoch.
using Millis = std::int64_t;

constexpr Millis kMillisPerMinute = 60'000;

/// One detector event as reported by the roadside unit.
struct VehicleRecord {
  Millis timestamp = 0;
  int lane = 0;
  double speed_kmh = 0.0;
  double length_m = 0.0;
  bool valid = false;
};

/// One calendar minute of traffic. Speed is the harmonic mean of the
/// member vehicle speeds and is absent when no vehicle passed.
struct MinuteInterval {
  Millis start = 0;  // aligned to a minute boundary
  int vehicle_count = 0;
  int pce = 0;
  std::optional<double> harmonic_mean_speed;
};

/// A rolling multi-minute window built from consecutive minutes.
/// mean_speed is the arithmetic mean of the member minutes' harmonic
/// means, skipping empty minutes; absent when every minute was empty.
struct AggregatedInterval {
  Millis start = 0;
  int width_minutes = 0;
  int pce = 0;
  std::optional<double> mean_speed;
};

/// One intensity record feeding the estimators: the PCE count of an
/// aggregation window together with the outcome of the evaluation
/// minute it preceded. breakdown == true marks the single uncensored
/// record of a breakdown event; false marks a censored survival.
struct Observation {
  int intensity = 0;
  bool breakdown = false;
  Millis timestamp = 0;
};

/// The censored/uncensored records produced by classification or
/// synthesis, plus the interval lengths they were produced with.
struct ObservationSet {
  std::vector<Observation> observations;
  int window_minutes = 3;     // aggregation interval length
  int eval_step_minutes = 1;  // failure-testing interval length
  int intensity_min = 0;
  int intensity_max = 0;

  std::size_t size() const { return observations.size(); }
  std::size_t breakdown_count() const;
  std::size_t censored_count() const { return size() - breakdown_count(); }
};

/// Scale and shape of a Weibull capacity distribution.
struct WeibullParams {
  double scale = 0.0;  // PCE per aggregation window
  double shape = 0.0;
};

/// Weibull capacity parameters plus the interval lengths of the data
/// they were fitted on. Horizon transforms reject mismatched use.
struct CapacityModel {
  WeibullParams weibull;
  int window_minutes = 3;
  int eval_step_minutes = 1;
};

/// One step of a product-limit survival estimate. Levels without
/// breakdowns are folded into the step of the preceding breakdown
/// level, so a step spans the closed range [level, level_end].
struct SurvivalStep {
  int level = 0;
  int level_end = 0;
  std::int64_t breakdowns = 0;        // failures at this level
  std::int64_t at_risk = 0;           // records with intensity >= level
  std::int64_t records_at_level = 0;  // records exactly at this level
  std::int64_t records_in_group = 0;  // records across [level, level_end]
  double partial_failure = 0.0;
  double partial_survival = 0.0;
  double survival = 0.0;  // running product up to this level
};

/// Non-parametric stepwise survival function over intensity levels.
struct StepSurvivalFunction {
  std::vector<SurvivalStep> steps;
  int intensity_min = 0;
  int intensity_max = 0;

  /// 1.0 below the first breakdown level, then the running product of
  /// the last step at or below the given intensity.
  double survival_at(double intensity) const;
};

/// Stepwise CDF, the complement of a StepSurvivalFunction.
struct StepCdf {
  std::vector<std::pair<int, double>> points;  // (level, F at level)

  double at(double intensity) const;
};

/// Cumulative frequency of breakdowns per integer intensity level,
/// either counted from data or predicted from a capacity CDF.
struct CfbCurve {
  int level_min = 0;
  std::vector<double> cumulative;
  std::vector<std::int64_t> exposure;  // records per level, all outcomes
  bool predicted = false;

  int level_max() const { return level_min + static_cast<int>(cumulative.size()) - 1; }
  double at(int level) const;
};

/// Goodness-of-fit summary between an empirical and a predicted curve.
/// are/awre are fractions (0.08 means 8 %).
struct ErrorReport {
  double sse = 0.0;
  double rmse = 0.0;
  double are = 0.0;
  double awre = 0.0;
  int n = 0;  // intensity levels compared
};

/// Thresholds of the breakdown classification state machine.
struct ClassifierConfig {
  double breakdown_speed = 40.0;     // km/h, window mean marking a breakdown
  double recovery_speed = 70.0;      // km/h, window mean marking recovery
  int recovery_window = 5;           // minutes, width of the recovery window
  double inconclusive_speed = 50.0;  // km/h, below this a dip is discarded
  int min_intensity = 45;            // PCE per window, lower records discarded
  int window_minutes = 3;
  int eval_step_minutes = 1;
  bool queue_onset_shift = true;  // shift the flow window when the queue formed earlier

  /// Throws std::invalid_argument when thresholds are inconsistent.
  void validate() const;
};

}  // namespace capest
