#pragma once

#include <span>
#include <vector>

#include "capest/types.hpp"

namespace capest {

/// Probability of a breakdown within the next horizon_minutes at
/// constant intensity: one failure test per eval step, each with the
/// window-level breakdown probability. The horizon must be a positive
/// multiple of the model's eval step.
double breakdown_prob_over(const CapacityModel& model, double intensity,
                           double horizon_minutes);

/// As above, cross-checking the caller's interval lengths against the
/// ones the model was fitted with; a mismatch throws
/// std::invalid_argument, as it would silently invalidate the result.
double breakdown_prob_over(const CapacityModel& model, double intensity,
                           double horizon_minutes, int window_minutes,
                           int eval_step_minutes);

/// Exact complement of breakdown_prob_over.
double survival_prob_over(const CapacityModel& model, double intensity,
                          double horizon_minutes);
double survival_prob_over(const CapacityModel& model, double intensity,
                          double horizon_minutes, int window_minutes,
                          int eval_step_minutes);

struct TimeToBreakdown {
  double mean_minutes = 0.0;
  double median_minutes = 0.0;
};

/// Mean and median of the exponential time to breakdown at constant
/// intensity. Throws std::domain_error when the breakdown probability
/// is zero (no finite expected time).
TimeToBreakdown time_to_breakdown_stats(const CapacityModel& model,
                                        double intensity);

/// Intensity at which the capacity CDF reaches probability p, the
/// inverse of the Weibull CDF. p must lie strictly inside (0, 1).
double capacity_at_probability(const WeibullParams& params, double p);

struct ScenarioRow {
  double probability = 0.0;
  double intensity_a = 0.0;
  double intensity_b = 0.0;
  double absolute_increase = 0.0;
  double relative_increase = 0.0;  // fraction of intensity_a
};

struct ScenarioComparison {
  std::vector<ScenarioRow> rows;
  double median_a = 0.0;
  double median_b = 0.0;
  double mean_relative_increase = 0.0;  // across the probability levels
};

/// Capacity shift between two fitted distributions at the given
/// breakdown-probability levels, plus medians and the average relative
/// increase. Differences use the unrounded intensities.
ScenarioComparison compare_scenarios(const WeibullParams& a,
                                     const WeibullParams& b,
                                     std::span<const double> levels);

}  // namespace capest
