#include "capest/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <tuple>

#include "capest/time.hpp"

namespace capest {
namespace {

constexpr std::size_t kMaxReportedIssues = 20;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

const char* const kEventColumns[] = {"timestamp", "lane", "speed_kmh",
                                     "length_m", "valid"};

}  // namespace

ParseResult parse_events(std::istream& in) {
  if (!in) throw std::ios_base::failure("cannot read event stream");

  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("empty input: expected header timestamp,lane,speed_kmh,length_m,valid");
  }
  const auto header = split_line(strip_cr(line));
  if (header.size() != 5) {
    throw SchemaError("bad header: expected 5 columns, got " +
                      std::to_string(header.size()));
  }
  for (std::size_t i = 0; i < 5; ++i) {
    if (header[i] != kEventColumns[i]) {
      throw SchemaError("bad header: column " + std::to_string(i + 1) +
                        " is '" + header[i] + "', expected '" +
                        kEventColumns[i] + "'");
    }
  }

  ParseResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    ++result.rows_total;

    auto reject = [&](const char* why) {
      ++result.rows_malformed;
      if (result.issues.size() < kMaxReportedIssues) {
        result.issues.push_back("line " + std::to_string(line_no) + ": " + why);
      }
    };

    const auto fields = split_line(line);
    if (fields.size() != 5) {
      reject("wrong field count");
      continue;
    }
    VehicleRecord rec;
    const auto ts = parse_iso8601(fields[0]);
    if (!ts) {
      reject("bad timestamp");
      continue;
    }
    rec.timestamp = *ts;
    if (!parse_int(fields[1], rec.lane)) {
      reject("bad lane");
      continue;
    }
    if (!parse_double(fields[2], rec.speed_kmh) || rec.speed_kmh <= 0.0) {
      reject("bad speed");
      continue;
    }
    if (!parse_double(fields[3], rec.length_m) || rec.length_m <= 0.0) {
      reject("bad length");
      continue;
    }
    if (fields[4] == "0") {
      rec.valid = false;
    } else if (fields[4] == "1") {
      rec.valid = true;
    } else {
      reject("bad valid flag");
      continue;
    }
    result.records.push_back(rec);
  }
  if (in.bad()) throw std::ios_base::failure("I/O error while reading events");
  return result;
}

FilterResult filter_events(std::vector<VehicleRecord> records,
                           const FilterConfig& config) {
  auto key = [](const VehicleRecord& r) {
    return std::tuple(r.timestamp, r.lane, r.speed_kmh, r.length_m);
  };
  std::sort(records.begin(), records.end(),
            [&](const VehicleRecord& a, const VehicleRecord& b) {
              return key(a) < key(b);
            });

  FilterResult result;
  result.kept.reserve(records.size());
  const VehicleRecord* last_kept = nullptr;
  for (const VehicleRecord& rec : records) {
    if (!rec.valid) {
      ++result.rejected.invalid;
      continue;
    }
    if (rec.speed_kmh <= 0.0 || rec.speed_kmh > config.max_speed_kmh ||
        rec.length_m <= 0.0 || rec.length_m > config.max_length_m) {
      ++result.rejected.implausible;
      continue;
    }
    if (last_kept != nullptr && key(*last_kept) == key(rec)) {
      ++result.rejected.duplicates;
      continue;
    }
    result.kept.push_back(rec);
    last_kept = &result.kept.back();
  }
  return result;
}

int pce_of(const VehicleRecord& record) {
  return record.length_m > 9.0 ? 2 : 1;
}

}  // namespace capest
