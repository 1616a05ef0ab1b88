#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "capest/types.hpp"

namespace capest {

/// Records observed per integer intensity level, censored and
/// uncensored alike. Levels inside [level_min, level_max] with no
/// records stay present with a zero count.
struct ExposureHistogram {
  int level_min = 0;
  std::vector<std::int64_t> counts;

  int level_max() const { return level_min + static_cast<int>(counts.size()) - 1; }
  std::int64_t at(int level) const;
  std::int64_t total() const;
};

/// Throws std::invalid_argument on an empty set.
ExposureHistogram exposure_histogram(const ObservationSet& obs);

/// Expected cumulative breakdowns per level: the running sum of
/// exposure times breakdown probability.
CfbCurve predicted_cfb(const ExposureHistogram& exposure,
                       const std::function<double(double)>& cdf);

/// Observed cumulative breakdowns per level; the final value equals the
/// total breakdown count. Throws std::invalid_argument on an empty set.
CfbCurve empirical_cfb(const ObservationSet& obs);

/// SSE, RMSE, ARE and AWRE between the two curves. Both must cover the
/// same level domain. Levels where the empirical curve is still zero
/// are excluded from the relative errors; the squared errors keep them.
/// AWRE weights each level by the predicted breakdowns added there.
ErrorReport error_metrics(const CfbCurve& empirical, const CfbCurve& predicted);

}  // namespace capest
