#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "capest/ingest.hpp"
#include "capest/simulate.hpp"
#include "capest/types.hpp"

namespace capest::io {

/// Fitted parameters plus the provenance recorded alongside them.
struct ParamsFile {
  WeibullParams params;
  int window_minutes = 3;
  int eval_step_minutes = 1;
  std::string likelihood;  // "new", "old", or empty for external params
  std::int64_t n_obs = 0;
  std::int64_t n_breakdowns = 0;
  double loglik = 0.0;

  CapacityModel model() const {
    return {params, window_minutes, eval_step_minutes};
  }
};

ParseResult read_events_csv(const std::filesystem::path& path);

std::vector<MinuteInterval> read_minutes_csv(const std::filesystem::path& path);
void write_minutes_csv(const std::filesystem::path& path,
                       const std::vector<MinuteInterval>& minutes);

ObservationSet read_observations_csv(const std::filesystem::path& path,
                                     int window_minutes, int eval_step_minutes);
void write_observations_csv(const std::filesystem::path& path,
                            const ObservationSet& obs);

ParamsFile read_params_json(const std::filesystem::path& path);
void write_params_json(const std::filesystem::path& path, const ParamsFile& params);

StepSurvivalFunction read_plm_csv(const std::filesystem::path& path);
void write_plm_csv(const std::filesystem::path& path,
                   const StepSurvivalFunction& survival);

void write_curves_csv(const std::filesystem::path& path, const CfbCurve& empirical,
                      const CfbCurve& predicted);
void write_report_json(const std::filesystem::path& path, const ErrorReport& report);

std::vector<PlanSegment> read_plan_csv(const std::filesystem::path& path);

}  // namespace capest::io
