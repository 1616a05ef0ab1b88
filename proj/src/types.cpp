#include "capest/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace capest {

std::size_t ObservationSet::breakdown_count() const {
  return static_cast<std::size_t>(
      std::count_if(observations.begin(), observations.end(),
                    [](const Observation& o) { return o.breakdown; }));
}

double StepSurvivalFunction::survival_at(double intensity) const {
  double value = 1.0;
  for (const SurvivalStep& step : steps) {
    if (static_cast<double>(step.level) > intensity) break;
    value = step.survival;
  }
  return value;
}

double StepCdf::at(double intensity) const {
  double value = 0.0;
  for (const auto& [level, f] : points) {
    if (static_cast<double>(level) > intensity) break;
    value = f;
  }
  return value;
}

double CfbCurve::at(int level) const {
  if (level < level_min) return 0.0;
  if (level > level_max()) return cumulative.empty() ? 0.0 : cumulative.back();
  return cumulative[static_cast<std::size_t>(level - level_min)];
}

void ClassifierConfig::validate() const {
  if (breakdown_speed <= 0.0 || inconclusive_speed <= 0.0 || recovery_speed <= 0.0) {
    throw std::invalid_argument("speed thresholds must be positive");
  }
  if (!(breakdown_speed < inconclusive_speed && inconclusive_speed < recovery_speed)) {
    throw std::invalid_argument("thresholds must satisfy breakdown < inconclusive < recovery");
  }
  if (min_intensity < 0) throw std::invalid_argument("min_intensity must be non-negative");
  if (window_minutes < 1 || recovery_window < 1 || eval_step_minutes < 1) {
    throw std::invalid_argument("interval lengths must be at least one minute");
  }
}

}  // namespace capest
