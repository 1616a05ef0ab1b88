#include "capest/transform.hpp"

#include <cmath>
#include <stdexcept>

#include "capest/estimate.hpp"

namespace capest {
namespace {

double hazard_exponent(const CapacityModel& model, double intensity,
                       double horizon_minutes) {
  if (intensity < 0.0) throw std::invalid_argument("intensity must be non-negative");
  if (!(horizon_minutes > 0.0)) throw std::invalid_argument("horizon must be positive");
  const double tf = static_cast<double>(model.eval_step_minutes);
  const double trials = horizon_minutes / tf;
  if (std::abs(trials - std::round(trials)) > 1e-9 * std::max(1.0, trials)) {
    throw std::invalid_argument("horizon must be a multiple of the failure-testing interval");
  }
  const double z = std::pow(intensity / model.weibull.scale, model.weibull.shape);
  return trials * z;
}

void check_provenance(const CapacityModel& model, int window_minutes,
                      int eval_step_minutes) {
  if (window_minutes != model.window_minutes) {
    throw std::invalid_argument(
        "intensity aggregation interval does not match the fitted model");
  }
  if (eval_step_minutes != model.eval_step_minutes) {
    throw std::invalid_argument(
        "failure-testing interval does not match the fitted model");
  }
}

}  // namespace

double breakdown_prob_over(const CapacityModel& model, double intensity,
                           double horizon_minutes) {
  return -std::expm1(-hazard_exponent(model, intensity, horizon_minutes));
}

double breakdown_prob_over(const CapacityModel& model, double intensity,
                           double horizon_minutes, int window_minutes,
                           int eval_step_minutes) {
  check_provenance(model, window_minutes, eval_step_minutes);
  return breakdown_prob_over(model, intensity, horizon_minutes);
}

double survival_prob_over(const CapacityModel& model, double intensity,
                          double horizon_minutes) {
  return std::exp(-hazard_exponent(model, intensity, horizon_minutes));
}

double survival_prob_over(const CapacityModel& model, double intensity,
                          double horizon_minutes, int window_minutes,
                          int eval_step_minutes) {
  check_provenance(model, window_minutes, eval_step_minutes);
  return survival_prob_over(model, intensity, horizon_minutes);
}

TimeToBreakdown time_to_breakdown_stats(const CapacityModel& model,
                                        double intensity) {
  const double f = weibull_cdf(model.weibull, intensity);
  if (f <= 0.0) {
    throw std::domain_error("breakdown probability is zero: no finite expected time");
  }
  const double tf = static_cast<double>(model.eval_step_minutes);
  TimeToBreakdown t;
  t.mean_minutes = tf / f;
  t.median_minutes = tf * std::log(2.0) / f;
  return t;
}

double capacity_at_probability(const WeibullParams& params, double p) {
  if (!(params.scale > 0.0) || !(params.shape > 0.0)) {
    throw std::invalid_argument("Weibull scale and shape must be positive");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("probability must lie strictly inside (0, 1)");
  }
  return params.scale * std::pow(-std::log1p(-p), 1.0 / params.shape);
}

ScenarioComparison compare_scenarios(const WeibullParams& a,
                                     const WeibullParams& b,
                                     std::span<const double> levels) {
  ScenarioComparison cmp;
  cmp.median_a = capacity_at_probability(a, 0.5);
  cmp.median_b = capacity_at_probability(b, 0.5);
  cmp.rows.reserve(levels.size());
  double rel_sum = 0.0;
  for (const double p : levels) {
    ScenarioRow row;
    row.probability = p;
    row.intensity_a = capacity_at_probability(a, p);
    row.intensity_b = capacity_at_probability(b, p);
    row.absolute_increase = row.intensity_b - row.intensity_a;
    row.relative_increase = row.absolute_increase / row.intensity_a;
    rel_sum += row.relative_increase;
    cmp.rows.push_back(row);
  }
  if (!cmp.rows.empty()) {
    cmp.mean_relative_increase = rel_sum / static_cast<double>(cmp.rows.size());
  }
  return cmp;
}

}  // namespace capest
