#include "capest/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "capest/time.hpp"
#include "json.hpp"

namespace capest::io {
namespace {

using nlohmann::ordered_json;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  return in;
}

// Output is built in memory and written in one go, so a failed run
// never leaves a partial file behind.
void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

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

void expect_header(std::istream& in, const std::filesystem::path& path,
                   const std::vector<std::string>& expected) {
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError(path.string() + ": empty file, expected a header");
  }
  const auto fields = split_line(strip_cr(line));
  if (fields.size() != expected.size()) {
    throw SchemaError(path.string() + ": expected " + std::to_string(expected.size()) +
                      " columns, got " + std::to_string(fields.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (fields[i] != expected[i]) {
      throw SchemaError(path.string() + ": column " + std::to_string(i + 1) + " is '" +
                        fields[i] + "', expected '" + expected[i] + "'");
    }
  }
}

double parse_double_or_throw(const std::string& s, const std::string& context) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(out)) {
    throw SchemaError(context + ": bad number '" + s + "'");
  }
  return out;
}

std::int64_t parse_int_or_throw(const std::string& s, const std::string& context) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw SchemaError(context + ": bad integer '" + s + "'");
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double get_number(const ordered_json& j, const char* key, const std::string& context) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw SchemaError(context + ": missing numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

}  // namespace

ParseResult read_events_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_events(in);
}

std::vector<MinuteInterval> read_minutes_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  expect_header(in, path, {"start", "vehicle_count", "pce", "harmonic_mean_speed_kmh"});
  std::vector<MinuteInterval> minutes;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string context = path.string() + " line " + std::to_string(line_no);
    const auto fields = split_line(line);
    if (fields.size() != 4) throw SchemaError(context + ": expected 4 fields");
    MinuteInterval minute;
    const auto ts = parse_iso8601(fields[0]);
    if (!ts) throw SchemaError(context + ": bad timestamp '" + fields[0] + "'");
    minute.start = *ts;
    minute.vehicle_count = static_cast<int>(parse_int_or_throw(fields[1], context));
    minute.pce = static_cast<int>(parse_int_or_throw(fields[2], context));
    if (minute.vehicle_count < 0 || minute.pce < minute.vehicle_count ||
        minute.pce > 2 * minute.vehicle_count) {
      throw SchemaError(context + ": pce must lie between the vehicle count and twice it");
    }
    if (!fields[3].empty()) {
      minute.harmonic_mean_speed = parse_double_or_throw(fields[3], context);
      if (minute.vehicle_count == 0) {
        throw SchemaError(context + ": speed given for an empty minute");
      }
    } else if (minute.vehicle_count > 0) {
      throw SchemaError(context + ": missing speed for a non-empty minute");
    }
    minutes.push_back(minute);
  }
  return minutes;
}

void write_minutes_csv(const std::filesystem::path& path,
                       const std::vector<MinuteInterval>& minutes) {
  std::ostringstream out;
  out << "start,vehicle_count,pce,harmonic_mean_speed_kmh\n";
  for (const MinuteInterval& m : minutes) {
    out << format_iso8601(m.start) << ',' << m.vehicle_count << ',' << m.pce << ',';
    if (m.harmonic_mean_speed) out << fmt(*m.harmonic_mean_speed);
    out << '\n';
  }
  write_file(path, out.str());
}

ObservationSet read_observations_csv(const std::filesystem::path& path,
                                     int window_minutes, int eval_step_minutes) {
  auto in = open_input(path);
  expect_header(in, path, {"timestamp", "intensity_pce_window", "breakdown"});
  ObservationSet set;
  set.window_minutes = window_minutes;
  set.eval_step_minutes = eval_step_minutes;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string context = path.string() + " line " + std::to_string(line_no);
    const auto fields = split_line(line);
    if (fields.size() != 3) throw SchemaError(context + ": expected 3 fields");
    Observation o;
    const auto ts = parse_iso8601(fields[0]);
    if (!ts) throw SchemaError(context + ": bad timestamp '" + fields[0] + "'");
    o.timestamp = *ts;
    o.intensity = static_cast<int>(parse_int_or_throw(fields[1], context));
    if (o.intensity <= 0) throw SchemaError(context + ": intensity must be positive");
    if (fields[2] == "0") {
      o.breakdown = false;
    } else if (fields[2] == "1") {
      o.breakdown = true;
    } else {
      throw SchemaError(context + ": breakdown flag must be 0 or 1");
    }
    set.observations.push_back(o);
  }
  for (const Observation& o : set.observations) {
    if (set.intensity_min == 0 || o.intensity < set.intensity_min) {
      set.intensity_min = o.intensity;
    }
    set.intensity_max = std::max(set.intensity_max, o.intensity);
  }
  return set;
}

void write_observations_csv(const std::filesystem::path& path,
                            const ObservationSet& obs) {
  std::ostringstream out;
  out << "timestamp,intensity_pce_window,breakdown\n";
  for (const Observation& o : obs.observations) {
    out << format_iso8601(o.timestamp) << ',' << o.intensity << ','
        << (o.breakdown ? '1' : '0') << '\n';
  }
  write_file(path, out.str());
}

ParamsFile read_params_json(const std::filesystem::path& path) {
  auto in = open_input(path);
  ordered_json j;
  try {
    in >> j;
  } catch (const ordered_json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  const std::string context = path.string();
  ParamsFile p;
  p.params.scale = get_number(j, "scale", context);
  p.params.shape = get_number(j, "shape", context);
  if (!(p.params.scale > 0.0) || !(p.params.shape > 0.0)) {
    throw SchemaError(context + ": scale and shape must be positive");
  }
  p.window_minutes = static_cast<int>(get_number(j, "window_minutes", context));
  p.eval_step_minutes = static_cast<int>(get_number(j, "eval_step_minutes", context));
  if (j.contains("likelihood")) p.likelihood = j["likelihood"].get<std::string>();
  if (j.contains("n_obs")) p.n_obs = j["n_obs"].get<std::int64_t>();
  if (j.contains("n_breakdowns")) p.n_breakdowns = j["n_breakdowns"].get<std::int64_t>();
  if (j.contains("loglik")) p.loglik = j["loglik"].get<double>();
  return p;
}

void write_params_json(const std::filesystem::path& path, const ParamsFile& params) {
  ordered_json j;
  j["scale"] = params.params.scale;
  j["shape"] = params.params.shape;
  j["window_minutes"] = params.window_minutes;
  j["eval_step_minutes"] = params.eval_step_minutes;
  j["likelihood"] = params.likelihood;
  j["n_obs"] = params.n_obs;
  j["n_breakdowns"] = params.n_breakdowns;
  j["loglik"] = params.loglik;
  write_file(path, j.dump(2) + "\n");
}

StepSurvivalFunction read_plm_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  expect_header(in, path,
                {"level", "level_end", "breakdowns", "at_risk", "records_at_level",
                 "records_in_group", "partial_failure", "partial_survival", "survival"});
  StepSurvivalFunction fn;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string context = path.string() + " line " + std::to_string(line_no);
    const auto fields = split_line(line);
    if (fields.size() != 9) throw SchemaError(context + ": expected 9 fields");
    SurvivalStep step;
    step.level = static_cast<int>(parse_int_or_throw(fields[0], context));
    step.level_end = static_cast<int>(parse_int_or_throw(fields[1], context));
    step.breakdowns = parse_int_or_throw(fields[2], context);
    step.at_risk = parse_int_or_throw(fields[3], context);
    step.records_at_level = parse_int_or_throw(fields[4], context);
    step.records_in_group = parse_int_or_throw(fields[5], context);
    step.partial_failure = parse_double_or_throw(fields[6], context);
    step.partial_survival = parse_double_or_throw(fields[7], context);
    step.survival = parse_double_or_throw(fields[8], context);
    if (step.survival < 0.0 || step.survival > 1.0) {
      throw SchemaError(context + ": survival outside [0, 1]");
    }
    if (!fn.steps.empty() && step.level <= fn.steps.back().level) {
      throw SchemaError(context + ": levels must increase");
    }
    fn.steps.push_back(step);
  }
  if (!fn.steps.empty()) {
    fn.intensity_min = fn.steps.front().level;
    fn.intensity_max = fn.steps.back().level_end;
  }
  return fn;
}

void write_plm_csv(const std::filesystem::path& path,
                   const StepSurvivalFunction& survival) {
  std::ostringstream out;
  out << "level,level_end,breakdowns,at_risk,records_at_level,records_in_group,"
         "partial_failure,partial_survival,survival\n";
  for (const SurvivalStep& s : survival.steps) {
    out << s.level << ',' << s.level_end << ',' << s.breakdowns << ',' << s.at_risk
        << ',' << s.records_at_level << ',' << s.records_in_group << ','
        << fmt(s.partial_failure) << ',' << fmt(s.partial_survival) << ','
        << fmt(s.survival) << '\n';
  }
  write_file(path, out.str());
}

void write_curves_csv(const std::filesystem::path& path, const CfbCurve& empirical,
                      const CfbCurve& predicted) {
  std::ostringstream out;
  out << "intensity,cfb_empirical,cfb_predicted\n";
  for (std::size_t i = 0; i < empirical.cumulative.size(); ++i) {
    out << (empirical.level_min + static_cast<int>(i)) << ','
        << fmt(empirical.cumulative[i]) << ',' << fmt(predicted.cumulative[i]) << '\n';
  }
  write_file(path, out.str());
}

void write_report_json(const std::filesystem::path& path, const ErrorReport& report) {
  ordered_json j;
  j["sse"] = report.sse;
  j["rmse"] = report.rmse;
  j["are"] = report.are;
  j["awre"] = report.awre;
  j["n"] = report.n;
  write_file(path, j.dump(2) + "\n");
}

std::vector<PlanSegment> read_plan_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  expect_header(in, path, {"intensity", "duration_min"});
  std::vector<PlanSegment> plan;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string context = path.string() + " line " + std::to_string(line_no);
    const auto fields = split_line(line);
    if (fields.size() != 2) throw SchemaError(context + ": expected 2 fields");
    PlanSegment seg;
    seg.intensity = parse_double_or_throw(fields[0], context);
    seg.duration_minutes = parse_double_or_throw(fields[1], context);
    if (seg.intensity < 0.0 || !(seg.duration_minutes > 0.0)) {
      throw SchemaError(context + ": intensity must be non-negative and duration positive");
    }
    plan.push_back(seg);
  }
  return plan;
}

}  // namespace capest::io
