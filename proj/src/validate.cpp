#include "capest/validate.hpp"

#include <cmath>
#include <stdexcept>

namespace capest {

std::int64_t ExposureHistogram::at(int level) const {
  if (level < level_min || level > level_max()) return 0;
  return counts[static_cast<std::size_t>(level - level_min)];
}

std::int64_t ExposureHistogram::total() const {
  std::int64_t sum = 0;
  for (const std::int64_t c : counts) sum += c;
  return sum;
}

ExposureHistogram exposure_histogram(const ObservationSet& obs) {
  if (obs.observations.empty()) {
    throw std::invalid_argument("cannot build exposure from zero observations");
  }
  ExposureHistogram h;
  h.level_min = obs.intensity_min;
  h.counts.assign(static_cast<std::size_t>(obs.intensity_max - obs.intensity_min) + 1, 0);
  for (const Observation& o : obs.observations) {
    h.counts[static_cast<std::size_t>(o.intensity - h.level_min)] += 1;
  }
  return h;
}

CfbCurve predicted_cfb(const ExposureHistogram& exposure,
                       const std::function<double(double)>& cdf) {
  CfbCurve curve;
  curve.level_min = exposure.level_min;
  curve.predicted = true;
  curve.exposure = exposure.counts;
  curve.cumulative.reserve(exposure.counts.size());
  double running = 0.0;
  for (std::size_t i = 0; i < exposure.counts.size(); ++i) {
    const double level = static_cast<double>(exposure.level_min) + static_cast<double>(i);
    running += static_cast<double>(exposure.counts[i]) * cdf(level);
    curve.cumulative.push_back(running);
  }
  return curve;
}

CfbCurve empirical_cfb(const ObservationSet& obs) {
  const ExposureHistogram exposure = exposure_histogram(obs);
  CfbCurve curve;
  curve.level_min = exposure.level_min;
  curve.predicted = false;
  curve.exposure = exposure.counts;
  std::vector<std::int64_t> breakdowns(exposure.counts.size(), 0);
  for (const Observation& o : obs.observations) {
    if (o.breakdown) breakdowns[static_cast<std::size_t>(o.intensity - curve.level_min)] += 1;
  }
  curve.cumulative.reserve(breakdowns.size());
  double running = 0.0;
  for (const std::int64_t b : breakdowns) {
    running += static_cast<double>(b);
    curve.cumulative.push_back(running);
  }
  return curve;
}

ErrorReport error_metrics(const CfbCurve& empirical, const CfbCurve& predicted) {
  if (empirical.level_min != predicted.level_min ||
      empirical.cumulative.size() != predicted.cumulative.size()) {
    throw std::invalid_argument("curves must cover the same intensity levels");
  }

  ErrorReport report;
  report.n = static_cast<int>(empirical.cumulative.size());
  double re_sum = 0.0;
  int re_count = 0;
  double weighted_re_sum = 0.0;
  double weight_sum = 0.0;
  double prev_predicted = 0.0;
  for (std::size_t i = 0; i < empirical.cumulative.size(); ++i) {
    const double e = empirical.cumulative[i];
    const double p = predicted.cumulative[i];
    const double diff = e - p;
    report.sse += diff * diff;
    const double weight = p - prev_predicted;  // breakdowns predicted at this level
    prev_predicted = p;
    if (e > 0.0) {
      const double re = std::abs(diff / e);
      re_sum += re;
      ++re_count;
      weighted_re_sum += weight * re;
      weight_sum += weight;
    }
  }
  report.rmse = std::sqrt(report.sse / static_cast<double>(report.n));
  report.are = re_count > 0 ? re_sum / static_cast<double>(re_count) : 0.0;
  report.awre = weight_sum > 0.0 ? weighted_re_sum / weight_sum : 0.0;
  return report;
}

}  // namespace capest
