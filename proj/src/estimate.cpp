#include "capest/estimate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace capest {
namespace {

constexpr double kMinProb = 1e-300;
constexpr double kMinLog = -690.77552789821368;  // ln(1e-300)

void check_params(const WeibullParams& p) {
  if (!(p.scale > 0.0) || !(p.shape > 0.0)) {
    throw std::invalid_argument("Weibull scale and shape must be positive");
  }
}

// Per-observation log terms shared by the direct and histogram paths.
struct LogTerms {
  double ln_breakdown;  // corrected: ln F; legacy: ln f
  double ln_survival;   // ln(1 - F), clamped
};

LogTerms log_terms(const WeibullParams& p, double intensity, Likelihood kind) {
  const double z = std::pow(intensity / p.scale, p.shape);
  LogTerms t;
  t.ln_survival = std::max(-z, kMinLog);  // 1 - F = exp(-z)
  if (kind == Likelihood::corrected) {
    const double f = std::clamp(-std::expm1(-z), kMinProb, 1.0);
    t.ln_breakdown = std::log(f);
  } else {
    const double ln_pdf = std::log(p.shape) - std::log(p.scale) +
                          (p.shape - 1.0) * std::log(intensity / p.scale) - z;
    t.ln_breakdown = std::max(ln_pdf, kMinLog);
  }
  return t;
}

// Observation counts per integer intensity level; collapses the
// likelihood sum from one term per record to one per level.
struct LevelCounts {
  int level_min = 0;
  std::vector<std::int64_t> censored;
  std::vector<std::int64_t> uncensored;
};

LevelCounts count_levels(const ObservationSet& obs) {
  LevelCounts c;
  c.level_min = obs.intensity_min;
  const std::size_t span =
      static_cast<std::size_t>(obs.intensity_max - obs.intensity_min) + 1;
  c.censored.assign(span, 0);
  c.uncensored.assign(span, 0);
  for (const Observation& o : obs.observations) {
    const auto i = static_cast<std::size_t>(o.intensity - c.level_min);
    (o.breakdown ? c.uncensored : c.censored)[i] += 1;
  }
  return c;
}

double histogram_loglik(const WeibullParams& p, const LevelCounts& counts,
                        Likelihood kind) {
  double ll = 0.0;
  for (std::size_t i = 0; i < counts.censored.size(); ++i) {
    const std::int64_t b = counts.uncensored[i];
    const std::int64_t c = counts.censored[i];
    if (b == 0 && c == 0) continue;
    const double intensity = static_cast<double>(counts.level_min) + static_cast<double>(i);
    const LogTerms t = log_terms(p, intensity, kind);
    ll += static_cast<double>(b) * t.ln_breakdown + static_cast<double>(c) * t.ln_survival;
  }
  return ll;
}

using Point = std::array<double, 2>;  // (ln scale, ln shape)

WeibullParams to_params(const Point& x) {
  return {std::exp(x[0]), std::exp(x[1])};
}

double simplex_diameter(const std::array<Point, 3>& v) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      d = std::max(d, std::hypot(v[i][0] - v[j][0], v[i][1] - v[j][1]));
    }
  }
  return d;
}

}  // namespace

double weibull_cdf(const WeibullParams& params, double intensity) {
  check_params(params);
  if (intensity < 0.0) throw std::invalid_argument("intensity must be non-negative");
  return -std::expm1(-std::pow(intensity / params.scale, params.shape));
}

double weibull_pdf(const WeibullParams& params, double intensity) {
  check_params(params);
  if (intensity < 0.0) throw std::invalid_argument("intensity must be non-negative");
  if (intensity == 0.0) {
    if (params.shape > 1.0) return 0.0;
    if (params.shape == 1.0) return 1.0 / params.scale;
    return std::numeric_limits<double>::infinity();
  }
  const double ratio = intensity / params.scale;
  const double z = std::pow(ratio, params.shape);
  return params.shape / params.scale * std::pow(ratio, params.shape - 1.0) * std::exp(-z);
}

StepSurvivalFunction plm_estimate(const ObservationSet& obs) {
  if (obs.observations.empty()) {
    throw std::invalid_argument("cannot estimate survival from zero observations");
  }
  const LevelCounts counts = count_levels(obs);
  const std::size_t span = counts.censored.size();

  // Records with intensity >= level, the product-limit notion of exposure.
  std::vector<std::int64_t> at_risk(span, 0);
  std::int64_t suffix = 0;
  for (std::size_t i = span; i-- > 0;) {
    suffix += counts.censored[i] + counts.uncensored[i];
    at_risk[i] = suffix;
  }

  StepSurvivalFunction fn;
  fn.intensity_min = obs.intensity_min;
  fn.intensity_max = obs.intensity_max;
  double running = 1.0;
  for (std::size_t i = 0; i < span; ++i) {
    if (counts.uncensored[i] == 0) continue;
    SurvivalStep step;
    step.level = counts.level_min + static_cast<int>(i);
    step.breakdowns = counts.uncensored[i];
    step.at_risk = at_risk[i];
    step.records_at_level = counts.censored[i] + counts.uncensored[i];
    step.partial_failure =
        static_cast<double>(step.breakdowns) / static_cast<double>(step.at_risk);
    step.partial_survival = 1.0 - step.partial_failure;
    running *= step.partial_survival;
    step.survival = running;
    fn.steps.push_back(step);
  }
  // Levels without breakdowns group into the preceding step.
  for (std::size_t k = 0; k < fn.steps.size(); ++k) {
    SurvivalStep& step = fn.steps[k];
    step.level_end = (k + 1 < fn.steps.size()) ? fn.steps[k + 1].level - 1
                                               : obs.intensity_max;
    step.records_in_group = 0;
    for (int level = step.level; level <= step.level_end; ++level) {
      const auto i = static_cast<std::size_t>(level - counts.level_min);
      step.records_in_group += counts.censored[i] + counts.uncensored[i];
    }
  }
  return fn;
}

StepCdf survival_to_cdf(const StepSurvivalFunction& survival) {
  StepCdf cdf;
  cdf.points.reserve(survival.steps.size());
  for (const SurvivalStep& step : survival.steps) {
    cdf.points.emplace_back(step.level, 1.0 - step.survival);
  }
  return cdf;
}

double log_likelihood(const WeibullParams& params, const ObservationSet& obs,
                      Likelihood kind) {
  check_params(params);
  double ll = 0.0;
  for (const Observation& o : obs.observations) {
    const LogTerms t = log_terms(params, static_cast<double>(o.intensity), kind);
    ll += o.breakdown ? t.ln_breakdown : t.ln_survival;
  }
  return ll;
}

FitResult fit_mle(const ObservationSet& obs, Likelihood kind,
                  const OptimizerConfig& config) {
  const std::size_t breakdowns = obs.breakdown_count();
  if (obs.observations.empty() || breakdowns == 0) {
    throw EstimationError("degenerate: likelihood maximized at scale -> infinity (no uncensored observations)");
  }
  if (breakdowns == obs.observations.size()) {
    throw EstimationError("degenerate: no censored observations");
  }

  const LevelCounts counts = count_levels(obs);
  auto objective = [&](const Point& x) {
    return -histogram_loglik(to_params(x), counts, kind);
  };

  // Coarse grid pre-scan for the simplex start.
  const double i_max = static_cast<double>(obs.intensity_max);
  const int n = std::max(config.grid_points, 2);
  Point best{};
  double best_val = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    const double scale = i_max * (config.scale_lo_factor +
                                  (config.scale_hi_factor - config.scale_lo_factor) *
                                      a / (n - 1.0));
    for (int b = 0; b < n; ++b) {
      const double shape = config.shape_lo +
                           (config.shape_hi - config.shape_lo) * b / (n - 1.0);
      const Point x{std::log(scale), std::log(shape)};
      const double val = objective(x);
      if (val < best_val) {
        best_val = val;
        best = x;
      }
    }
  }

  // Nelder-Mead in log-parameter space.
  std::array<Point, 3> v{best, Point{best[0] + 0.05, best[1]},
                         Point{best[0], best[1] + 0.05}};
  std::array<double, 3> f{objective(v[0]), objective(v[1]), objective(v[2])};

  int iterations = 0;
  bool converged = false;
  for (; iterations < config.max_iterations; ++iterations) {
    // Order so that v[0] is best and v[2] worst.
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
    v = {v[idx[0]], v[idx[1]], v[idx[2]]};
    f = {f[idx[0]], f[idx[1]], f[idx[2]]};

    if (simplex_diameter(v) < config.tolerance) {
      converged = true;
      break;
    }

    const Point centroid{(v[0][0] + v[1][0]) / 2.0, (v[0][1] + v[1][1]) / 2.0};
    auto along = [&](double coef) {
      return Point{centroid[0] + coef * (centroid[0] - v[2][0]),
                   centroid[1] + coef * (centroid[1] - v[2][1])};
    };

    const Point reflected = along(1.0);
    const double fr = objective(reflected);
    if (fr < f[0]) {
      const Point expanded = along(2.0);
      const double fe = objective(expanded);
      if (fe < fr) {
        v[2] = expanded;
        f[2] = fe;
      } else {
        v[2] = reflected;
        f[2] = fr;
      }
      continue;
    }
    if (fr < f[1]) {
      v[2] = reflected;
      f[2] = fr;
      continue;
    }
    const Point contracted = fr < f[2] ? along(0.5) : along(-0.5);
    const double fc = objective(contracted);
    if (fc < std::min(fr, f[2])) {
      v[2] = contracted;
      f[2] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (int i = 1; i < 3; ++i) {
      v[i] = {v[0][0] + 0.5 * (v[i][0] - v[0][0]),
              v[0][1] + 0.5 * (v[i][1] - v[0][1])};
      f[i] = objective(v[i]);
    }
  }

  const int best_idx = static_cast<int>(
      std::min_element(f.begin(), f.end()) - f.begin());
  const WeibullParams params = to_params(v[static_cast<std::size_t>(best_idx)]);
  if (!converged) {
    throw EstimationError("optimizer did not converge within the iteration limit", params);
  }

  FitResult result;
  result.params = params;
  result.diagnostics.loglik = log_likelihood(params, obs, kind);
  result.diagnostics.iterations = iterations;
  result.diagnostics.converged = true;
  return result;
}

}  // namespace capest
