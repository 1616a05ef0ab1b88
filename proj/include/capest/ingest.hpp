#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "capest/types.hpp"

namespace capest {

/// Raised when an input file does not match its documented schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParseResult {
  std::vector<VehicleRecord> records;
  std::size_t rows_total = 0;
  std::size_t rows_malformed = 0;
  std::vector<std::string> issues;  // first few malformed rows, for reporting
};

/// Reads raw event CSV: header "timestamp,lane,speed_kmh,length_m,valid",
/// ISO-8601 timestamps, valid in {0,1}. Malformed rows are counted and
/// reported in the result, never silently dropped. Throws SchemaError on
/// a bad header and std::ios_base::failure on an unreadable stream.
ParseResult parse_events(std::istream& in);

struct FilterConfig {
  double max_speed_kmh = 250.0;
  double max_length_m = 30.0;
};

struct RejectionSummary {
  std::size_t invalid = 0;      // detector marked the record invalid
  std::size_t implausible = 0;  // speed/length non-positive or above caps
  std::size_t duplicates = 0;   // identical (timestamp, lane, speed, length)

  std::size_t total() const { return invalid + implausible + duplicates; }
};

struct FilterResult {
  std::vector<VehicleRecord> kept;  // sorted by timestamp
  RejectionSummary rejected;
};

/// Drops invalid, implausible, and duplicate records. Total function:
/// kept + rejected == input, per reason and overall.
FilterResult filter_events(std::vector<VehicleRecord> records,
                           const FilterConfig& config = {});

/// Passenger-car equivalent of one vehicle: 2 when longer than 9 m, else 1.
int pce_of(const VehicleRecord& record);

}  // namespace capest
