// Command-line front end for the capacity estimation toolkit.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capest/aggregate.hpp"
#include "capest/classify.hpp"
#include "capest/estimate.hpp"
#include "capest/ingest.hpp"
#include "capest/io.hpp"
#include "capest/simulate.hpp"
#include "capest/time.hpp"
#include "capest/transform.hpp"
#include "capest/validate.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct IngestArgs {
  std::string input;
  std::string output;
  capest::FilterConfig filter;
};

int run_ingest(const IngestArgs& args) {
  const capest::ParseResult parsed = capest::io::read_events_csv(args.input);
  if (parsed.rows_malformed > 0) {
    std::cerr << parsed.rows_malformed << " malformed row(s) skipped\n";
    for (const std::string& issue : parsed.issues) std::cerr << "  " << issue << "\n";
  }
  const capest::FilterResult filtered = capest::filter_events(parsed.records, args.filter);
  std::cerr << "kept " << filtered.kept.size() << " of " << parsed.records.size()
            << " records (invalid " << filtered.rejected.invalid << ", implausible "
            << filtered.rejected.implausible << ", duplicates "
            << filtered.rejected.duplicates << ")\n";
  const auto minutes = capest::aggregate_minutes(filtered.kept);
  capest::io::write_minutes_csv(args.output, minutes);
  std::cout << "wrote " << minutes.size() << " minutes to " << args.output << "\n";
  return 0;
}

struct ClassifyArgs {
  std::string input;
  std::string output;
  capest::ClassifierConfig config;
};

int run_classify(const ClassifyArgs& args) {
  const auto minutes = capest::io::read_minutes_csv(args.input);
  const auto windows = capest::rolling_intervals(minutes, args.config.window_minutes);
  const auto recovery = capest::rolling_intervals(minutes, args.config.recovery_window);
  const capest::ClassifyResult result = capest::classify(minutes, windows, recovery, args.config);
  capest::io::write_observations_csv(args.output, result.observations);
  const auto& s = result.summary;
  std::cerr << "events " << s.events << " (unrecorded " << s.events_without_record
            << "), censored " << s.censored << ", discarded: dips " << s.discarded_dip
            << ", low intensity " << s.discarded_low_intensity << ", gaps "
            << s.discarded_gap << "\n";
  std::cout << "wrote " << result.observations.size() << " observations to "
            << args.output << "\n";
  return 0;
}

struct FitArgs {
  std::string input;
  std::string output;
  std::string likelihood = "new";
  int window_minutes = 3;
  int eval_step_minutes = 1;
  capest::OptimizerConfig optimizer;
};

int run_fit(const FitArgs& args) {
  const auto obs = capest::io::read_observations_csv(args.input, args.window_minutes,
                                                     args.eval_step_minutes);
  const auto kind = args.likelihood == "new" ? capest::Likelihood::corrected
                                             : capest::Likelihood::legacy;
  const capest::FitResult fit = capest::fit_mle(obs, kind, args.optimizer);
  capest::io::ParamsFile out;
  out.params = fit.params;
  out.window_minutes = obs.window_minutes;
  out.eval_step_minutes = obs.eval_step_minutes;
  out.likelihood = args.likelihood;
  out.n_obs = static_cast<std::int64_t>(obs.size());
  out.n_breakdowns = static_cast<std::int64_t>(obs.breakdown_count());
  out.loglik = fit.diagnostics.loglik;
  capest::io::write_params_json(args.output, out);
  std::cout << "scale " << fmt(fit.params.scale) << " shape " << fmt(fit.params.shape)
            << " loglik " << fmt(fit.diagnostics.loglik) << " iterations "
            << fit.diagnostics.iterations << "\n";
  return 0;
}

struct PlmArgs {
  std::string input;
  std::string output;
  int window_minutes = 3;
  int eval_step_minutes = 1;
};

int run_plm(const PlmArgs& args) {
  const auto obs = capest::io::read_observations_csv(args.input, args.window_minutes,
                                                     args.eval_step_minutes);
  const auto survival = capest::plm_estimate(obs);
  capest::io::write_plm_csv(args.output, survival);
  std::cout << "wrote " << survival.steps.size() << " survival steps to "
            << args.output << "\n";
  return 0;
}

struct ValidateArgs {
  std::string observations;
  std::string params_path;
  std::string plm_path;
  std::string curves_out;
  std::string report_out;
  int window_minutes = 3;
  int eval_step_minutes = 1;
};

int run_validate(const ValidateArgs& args) {
  const auto obs = capest::io::read_observations_csv(args.observations,
                                                     args.window_minutes,
                                                     args.eval_step_minutes);
  std::function<double(double)> cdf;
  if (!args.params_path.empty()) {
    const auto params = capest::io::read_params_json(args.params_path);
    cdf = [p = params.params](double intensity) { return capest::weibull_cdf(p, intensity); };
  } else {
    const auto survival = capest::io::read_plm_csv(args.plm_path);
    cdf = [step = capest::survival_to_cdf(survival)](double intensity) {
      return step.at(intensity);
    };
  }
  const auto exposure = capest::exposure_histogram(obs);
  const auto empirical = capest::empirical_cfb(obs);
  const auto predicted = capest::predicted_cfb(exposure, cdf);
  const auto report = capest::error_metrics(empirical, predicted);
  capest::io::write_curves_csv(args.curves_out, empirical, predicted);
  if (!args.report_out.empty()) capest::io::write_report_json(args.report_out, report);
  std::cout << "sse " << fmt(report.sse) << " rmse " << fmt(report.rmse) << " are "
            << fmt(report.are * 100.0) << "% awre " << fmt(report.awre * 100.0)
            << "% over " << report.n << " levels\n";
  return 0;
}

struct CompareArgs {
  std::string params_a;
  std::string params_b;
  std::string output;
  std::vector<double> levels = {0.001, 0.005, 0.01, 0.02, 0.05, 0.1};
};

int run_compare(const CompareArgs& args) {
  const auto a = capest::io::read_params_json(args.params_a);
  const auto b = capest::io::read_params_json(args.params_b);
  if (a.window_minutes != b.window_minutes || a.eval_step_minutes != b.eval_step_minutes) {
    throw std::invalid_argument("scenario parameters use different aggregation intervals");
  }
  const auto cmp = capest::compare_scenarios(a.params, b.params, args.levels);
  std::ostringstream out;
  out << "probability,intensity_a,intensity_b,absolute_increase,relative_increase_pct\n";
  for (const capest::ScenarioRow& row : cmp.rows) {
    out << fmt(row.probability) << ',' << fmt(row.intensity_a) << ','
        << fmt(row.intensity_b) << ',' << fmt(row.absolute_increase) << ','
        << fmt(row.relative_increase * 100.0) << '\n';
  }
  std::ofstream file(args.output, std::ios::trunc);
  if (!file) throw std::ios_base::failure("cannot open " + args.output + " for writing");
  file << out.str();
  std::cout << "median_a " << fmt(cmp.median_a) << " median_b " << fmt(cmp.median_b)
            << " mean_relative_increase " << fmt(cmp.mean_relative_increase * 100.0)
            << "%\n";
  return 0;
}

struct TransformArgs {
  std::string params_path;
  std::optional<double> intensity;
  double horizon = 60.0;
  std::optional<double> probability;
  std::optional<int> window_minutes;     // cross-checked against the file
  std::optional<int> eval_step_minutes;
};

int run_transform(const TransformArgs& args) {
  const auto params = capest::io::read_params_json(args.params_path);
  const capest::CapacityModel model = params.model();
  ordered_json out;
  if (args.intensity) {
    const double breakdown =
        args.window_minutes || args.eval_step_minutes
            ? capest::breakdown_prob_over(
                  model, *args.intensity, args.horizon,
                  args.window_minutes.value_or(model.window_minutes),
                  args.eval_step_minutes.value_or(model.eval_step_minutes))
            : capest::breakdown_prob_over(model, *args.intensity, args.horizon);
    out["intensity"] = *args.intensity;
    out["horizon_minutes"] = args.horizon;
    out["breakdown_probability"] = breakdown;
    out["survival_probability"] =
        capest::survival_prob_over(model, *args.intensity, args.horizon);
    if (capest::weibull_cdf(model.weibull, *args.intensity) > 0.0) {
      const auto t = capest::time_to_breakdown_stats(model, *args.intensity);
      out["mean_time_to_breakdown_min"] = t.mean_minutes;
      out["median_time_to_breakdown_min"] = t.median_minutes;
    }
  }
  if (args.probability) {
    out["probability"] = *args.probability;
    out["capacity"] = capest::capacity_at_probability(model.weibull, *args.probability);
  }
  if (out.empty()) {
    throw std::invalid_argument("nothing to compute: pass --intensity and/or --probability");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct SynthArgs {
  std::string output;
  std::string event_log;
  capest::SynthConfig config;
  double demand_start = -1.0;
  std::uint64_t seed = 1;
};

int run_synth(SynthArgs args) {
  if (args.demand_start >= 0.0) args.config.demand.start = args.demand_start;
  const capest::SynthResult result = capest::synth_observations(args.config, args.seed);
  capest::io::write_observations_csv(args.output, result.observations);
  if (!args.event_log.empty()) {
    std::ostringstream out;
    for (const capest::BreakdownEvent& e : result.events) {
      ordered_json j;
      j["minute"] = e.minute;
      j["timestamp"] = capest::format_iso8601(
          capest::kSynthEpoch + static_cast<capest::Millis>(e.minute) * capest::kMillisPerMinute);
      j["intensity"] = e.intensity;
      out << j.dump() << '\n';
    }
    std::ofstream file(args.event_log, std::ios::trunc);
    if (!file) throw std::ios_base::failure("cannot open " + args.event_log + " for writing");
    file << out.str();
  }
  std::cout << "wrote " << result.observations.size() << " observations ("
            << result.events.size() << " breakdowns) to " << args.output << "\n";
  return 0;
}

struct SimulateArgs {
  std::string plan_path;
  std::string params_path;
  std::string output;
  std::uint64_t seed = 1;
  int runs = 1;
};

int run_simulate(const SimulateArgs& args) {
  const auto plan = capest::io::read_plan_csv(args.plan_path);
  const auto params = capest::io::read_params_json(args.params_path);
  const capest::CapacityModel model = params.model();
  std::ostringstream out;
  out << "run,broke_down,time_min\n";
  std::size_t broke = 0;
  for (int run = 0; run < args.runs; ++run) {
    const auto t = capest::simulate_time_to_breakdown(plan, model, args.seed + static_cast<std::uint64_t>(run));
    out << run << ',' << (t ? 1 : 0) << ',';
    if (t) {
      out << fmt(*t);
      ++broke;
    }
    out << '\n';
  }
  std::ofstream file(args.output, std::ios::trunc);
  if (!file) throw std::ios_base::failure("cannot open " + args.output + " for writing");
  file << out.str();
  std::cout << broke << " of " << args.runs << " runs broke down; wrote "
            << args.output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic highway capacity estimation from censored traffic observations"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Raw detector events CSV to per-minute CSV");
  ingest->add_option("input", ingest_args.input, "raw events CSV")->required();
  ingest->add_option("-o,--output", ingest_args.output, "minutes CSV")->required();
  ingest->add_option("--max-speed", ingest_args.filter.max_speed_kmh, "plausibility cap, km/h");
  ingest->add_option("--max-length", ingest_args.filter.max_length_m, "plausibility cap, metres");

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand("classify", "Minutes CSV to censored/uncensored observations CSV");
  classify->add_option("input", classify_args.input, "minutes CSV")->required();
  classify->add_option("-o,--output", classify_args.output, "observations CSV")->required();
  classify->add_option("--breakdown-speed", classify_args.config.breakdown_speed, "km/h");
  classify->add_option("--recovery-speed", classify_args.config.recovery_speed, "km/h");
  classify->add_option("--recovery-window", classify_args.config.recovery_window, "minutes");
  classify->add_option("--inconclusive-speed", classify_args.config.inconclusive_speed, "km/h");
  classify->add_option("--min-intensity", classify_args.config.min_intensity, "PCE per window");
  classify->add_option("--window", classify_args.config.window_minutes, "aggregation interval, minutes");
  classify->add_option("--step", classify_args.config.eval_step_minutes, "failure-testing interval, minutes");
  classify->add_flag("!--no-queue-onset-shift", classify_args.config.queue_onset_shift,
                     "do not shift the flow window when the queue formed a minute earlier");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Maximum likelihood Weibull fit of observations");
  fit->add_option("input", fit_args.input, "observations CSV")->required();
  fit->add_option("-o,--output", fit_args.output, "params JSON")->required();
  fit->add_option("--likelihood", fit_args.likelihood, "new (corrected) or old (legacy)")
      ->check(CLI::IsMember({"new", "old"}));
  fit->add_option("--window", fit_args.window_minutes, "aggregation interval of the data");
  fit->add_option("--step", fit_args.eval_step_minutes, "failure-testing interval of the data");
  fit->add_option("--max-iter", fit_args.optimizer.max_iterations, "optimizer iteration cap");
  fit->add_option("--tol", fit_args.optimizer.tolerance, "simplex diameter tolerance");
  fit->add_option("--grid", fit_args.optimizer.grid_points, "pre-scan grid points per axis");

  PlmArgs plm_args;
  auto* plm = app.add_subcommand("plm", "Product-limit survival estimate of observations");
  plm->add_option("input", plm_args.input, "observations CSV")->required();
  plm->add_option("-o,--output", plm_args.output, "step-function CSV")->required();
  plm->add_option("--window", plm_args.window_minutes, "aggregation interval of the data");
  plm->add_option("--step", plm_args.eval_step_minutes, "failure-testing interval of the data");

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Compare predicted and empirical breakdown frequencies");
  validate->add_option("observations", validate_args.observations, "observations CSV")->required();
  auto* vp = validate->add_option("--params", validate_args.params_path, "fitted params JSON");
  auto* vs = validate->add_option("--plm", validate_args.plm_path, "step-function CSV");
  vp->excludes(vs);
  validate->add_option("-o,--output", validate_args.curves_out, "curves CSV")->required();
  validate->add_option("--report", validate_args.report_out, "error metrics JSON");
  validate->add_option("--window", validate_args.window_minutes, "aggregation interval of the data");
  validate->add_option("--step", validate_args.eval_step_minutes, "failure-testing interval of the data");

  CompareArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Capacity shift between two fitted scenarios");
  compare->add_option("params_a", compare_args.params_a, "baseline params JSON")->required();
  compare->add_option("params_b", compare_args.params_b, "alternative params JSON")->required();
  compare->add_option("-o,--output", compare_args.output, "comparison CSV")->required();
  compare->add_option("--levels", compare_args.levels, "breakdown probability levels")
      ->delimiter(',');

  TransformArgs transform_args;
  auto* transform = app.add_subcommand("transform", "Horizon probabilities and time to breakdown");
  transform->add_option("params", transform_args.params_path, "fitted params JSON")->required();
  transform->add_option("--intensity", transform_args.intensity, "PCE per window");
  transform->add_option("--horizon", transform_args.horizon, "minutes");
  transform->add_option("--probability", transform_args.probability, "level for the inverse CDF");
  transform->add_option("--window", transform_args.window_minutes,
                        "aggregation interval of the intensity, cross-checked");
  transform->add_option("--step", transform_args.eval_step_minutes,
                        "failure-testing interval, cross-checked");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Synthetic observations from a known capacity distribution");
  synth->add_option("-o,--output", synth_args.output, "observations CSV")->required();
  synth->add_option("--scale", synth_args.config.truth.scale, "true Weibull scale")->required();
  synth->add_option("--shape", synth_args.config.truth.shape, "true Weibull shape")->required();
  synth->add_option("--seed", synth_args.seed, "random seed");
  synth->add_option("--duration", synth_args.config.duration_minutes, "minutes to simulate");
  synth->add_option("--window", synth_args.config.window_minutes, "aggregation interval");
  synth->add_option("--step", synth_args.config.eval_step_minutes, "failure-testing interval");
  synth->add_option("--congestion-skip", synth_args.config.congestion_skip_minutes,
                    "minutes discarded after each breakdown");
  synth->add_option("--demand-mean", synth_args.config.demand.mean, "PCE per minute");
  synth->add_option("--demand-volatility", synth_args.config.demand.volatility, "noise sd");
  synth->add_option("--demand-reversion", synth_args.config.demand.reversion, "mean pull in [0,1]");
  synth->add_option("--demand-floor", synth_args.config.demand.floor, "lower clamp");
  synth->add_option("--demand-ceiling", synth_args.config.demand.ceiling, "upper clamp");
  synth->add_option("--demand-start", synth_args.demand_start, "initial level, defaults to mean");
  synth->add_option("--event-log", synth_args.event_log, "breakdown events JSONL");

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Time-to-breakdown samples over an intensity plan");
  simulate->add_option("plan", simulate_args.plan_path, "plan CSV (intensity,duration_min)")->required();
  simulate->add_option("params", simulate_args.params_path, "fitted params JSON")->required();
  simulate->add_option("-o,--output", simulate_args.output, "samples CSV")->required();
  simulate->add_option("--seed", simulate_args.seed, "random seed of the first run");
  simulate->add_option("--runs", simulate_args.runs, "number of independent runs")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(ingest)) return run_ingest(ingest_args);
    if (app.got_subcommand(classify)) return run_classify(classify_args);
    if (app.got_subcommand(fit)) return run_fit(fit_args);
    if (app.got_subcommand(plm)) return run_plm(plm_args);
    if (app.got_subcommand(validate)) {
      if (validate_args.params_path.empty() == validate_args.plm_path.empty()) {
        throw std::invalid_argument("pass exactly one of --params or --plm");
      }
      return run_validate(validate_args);
    }
    if (app.got_subcommand(compare)) return run_compare(compare_args);
    if (app.got_subcommand(transform)) return run_transform(transform_args);
    if (app.got_subcommand(synth)) return run_synth(synth_args);
    if (app.got_subcommand(simulate)) return run_simulate(simulate_args);
  } catch (const capest::EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
