#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "capest/types.hpp"

namespace capest {

/// Which likelihood the parametric fit maximizes. The corrected form
/// uses the capacity CDF for both outcomes; the legacy form uses the
/// density for breakdowns and reproduces the product-limit bias.
enum class Likelihood { corrected, legacy };

class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what,
                           std::optional<WeibullParams> best = std::nullopt)
      : std::runtime_error(what), best_so_far(best) {}

  std::optional<WeibullParams> best_so_far;
};

/// Weibull breakdown probability 1 - exp(-(I/scale)^shape).
/// Throws std::invalid_argument for negative intensity or bad params.
double weibull_cdf(const WeibullParams& params, double intensity);

/// Weibull density, the only density consistent with the CDF above.
double weibull_pdf(const WeibullParams& params, double intensity);

/// Product-limit (Kaplan-Meier) survival estimate over integer
/// intensity levels. Breakdowns sharing a level count into one step;
/// levels without breakdowns fold into the preceding step's group.
/// Throws std::invalid_argument on an empty set.
StepSurvivalFunction plm_estimate(const ObservationSet& obs);

/// F = 1 - S pointwise at each step level.
StepCdf survival_to_cdf(const StepSurvivalFunction& survival);

/// Log-likelihood of the observations under the given parameters.
/// Probabilities are clamped to [1e-300, 1] before taking logs, so the
/// result is always finite.
double log_likelihood(const WeibullParams& params, const ObservationSet& obs,
                      Likelihood kind);

struct OptimizerConfig {
  int grid_points = 20;          // per axis in the pre-scan
  double scale_lo_factor = 1.0;  // grid bounds as multiples of the max intensity
  double scale_hi_factor = 3.0;
  double shape_lo = 1.0;
  double shape_hi = 20.0;
  int max_iterations = 500;
  double tolerance = 1e-8;  // simplex diameter in log-parameter space
};

struct FitDiagnostics {
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  WeibullParams params;
  FitDiagnostics diagnostics;
};

/// Maximizes the chosen log-likelihood over (scale, shape) with a grid
/// pre-scan followed by Nelder-Mead in log-parameter space. Requires at
/// least one uncensored and one censored observation; throws
/// EstimationError otherwise, and on non-convergence (carrying the best
/// parameters found). Deterministic for a fixed configuration.
FitResult fit_mle(const ObservationSet& obs, Likelihood kind,
                  const OptimizerConfig& config = {});

}  // namespace capest
