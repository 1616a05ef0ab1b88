#pragma once

#include <vector>

#include "capest/types.hpp"

namespace capest {

/// Buckets filtered records into calendar minutes spanning the full
/// record range. pce sums the per-vehicle equivalents, speed is the
/// harmonic mean n / sum(1/v). Minutes without records stay empty.
std::vector<MinuteInterval> aggregate_minutes(
    const std::vector<VehicleRecord>& records);

/// Rolling windows of the given width with one-minute step, labelled by
/// their start minute. pce sums the member minutes; speed is the
/// arithmetic mean of the member harmonic means, skipping empty
/// minutes. Windows reaching past the data end are not emitted.
/// Throws std::invalid_argument when width < 1 or minutes are not a
/// contiguous ordered series.
std::vector<AggregatedInterval> rolling_intervals(
    const std::vector<MinuteInterval>& minutes, int width_minutes);

}  // namespace capest
