#pragma once

#include <cstddef>
#include <vector>

#include "capest/types.hpp"

namespace capest {

struct ClassifySummary {
  std::size_t events = 0;                  // breakdown onsets detected
  std::size_t events_without_record = 0;   // onsets with no usable flow window
  std::size_t censored = 0;
  std::size_t discarded_dip = 0;           // inconclusive speed drops
  std::size_t discarded_low_intensity = 0; // below the intensity floor
  std::size_t discarded_gap = 0;           // minutes without data
};

struct ClassifyResult {
  ObservationSet observations;
  ClassifySummary summary;
};

/// Scans the minute series for breakdowns and produces the censored and
/// uncensored intensity records.
///
/// Each minute with a full trailing window is a failure trial whose
/// intensity is the window ending immediately before it. A breakdown is
/// the first minute below breakdown_speed confirmed by a window mean
/// below breakdown_speed; it contributes the single uncensored record
/// of its event. Congestion lasts until the first recovery-width window
/// with mean above recovery_speed and is discarded together with that
/// window. Inconclusive dips, records below min_intensity, and data
/// gaps are discarded, not censored.
///
/// windows and recovery_windows must be the rolling series of the
/// config's window_minutes and recovery_window widths over the same
/// minutes; otherwise std::invalid_argument is thrown.
ClassifyResult classify(const std::vector<MinuteInterval>& minutes,
                        const std::vector<AggregatedInterval>& windows,
                        const std::vector<AggregatedInterval>& recovery_windows,
                        const ClassifierConfig& config = {});

}  // namespace capest
