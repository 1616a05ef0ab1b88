#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "capest/types.hpp"

namespace capest {

/// Parses "YYYY-MM-DDTHH:MM:SS[.mmm][Z]" to milliseconds since epoch.
/// Returns nullopt on malformed input.
std::optional<Millis> parse_iso8601(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SS.mmm".
std::string format_iso8601(Millis ms);

/// Index of the calendar minute containing the instant (floor).
std::int64_t minute_index(Millis ms);

/// Start instant of a calendar minute by index.
Millis minute_start(std::int64_t index);

}  // namespace capest
