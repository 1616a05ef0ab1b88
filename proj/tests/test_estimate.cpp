#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "capest/estimate.hpp"
#include "capest/rng.hpp"
#include "capest/simulate.hpp"
#include "doctest.h"

using namespace capest;

namespace {

ObservationSet make_set(std::vector<Observation> obs) {
  ObservationSet set;
  set.observations = std::move(obs);
  for (const Observation& o : set.observations) {
    if (set.intensity_min == 0 || o.intensity < set.intensity_min) {
      set.intensity_min = o.intensity;
    }
    set.intensity_max = std::max(set.intensity_max, o.intensity);
  }
  return set;
}

void add_level(std::vector<Observation>& obs, int level, int breakdowns, int censored) {
  for (int i = 0; i < breakdowns; ++i) obs.push_back({level, true, 0});
  for (int i = 0; i < censored; ++i) obs.push_back({level, false, 0});
}

SynthConfig recovery_config() {
  SynthConfig config;
  config.truth = {146.42, 6.75};
  config.demand.mean = 29.0;
  config.demand.volatility = 2.0;
  config.demand.reversion = 0.05;
  config.demand.floor = 15.0;
  config.demand.ceiling = 45.0;
  config.duration_minutes = 40'000;
  return config;
}

}  // namespace

TEST_CASE("weibull_cdf reference values") {
  CHECK(weibull_cdf({146.42, 6.75}, 0.0) == 0.0);
  CHECK(weibull_cdf({100.0, 3.0}, 100.0) == doctest::Approx(0.6321205588).epsilon(1e-9));
  CHECK(weibull_cdf({50.0, 1.0}, 50.0) == doctest::Approx(0.6321205588).epsilon(1e-9));
  // The 10 % breakdown-probability intensity of the uncontrolled scenario.
  CHECK(weibull_cdf({146.42, 6.75}, 104.9) == doctest::Approx(0.100).epsilon(1e-3));
  CHECK_THROWS_AS(weibull_cdf({146.42, 6.75}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(weibull_cdf({0.0, 6.75}, 1.0), std::invalid_argument);
}

TEST_CASE("weibull_cdf scale consistency and monotonicity") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double scale = 20.0 + rng.next_unit() * 280.0;
    const double shape = 0.5 + rng.next_unit() * 14.5;
    const double intensity = rng.next_unit() * 2.0 * scale;
    const double c = 0.1 + rng.next_unit() * 9.9;
    CHECK(weibull_cdf({scale, shape}, intensity) ==
          doctest::Approx(weibull_cdf({c * scale, shape}, c * intensity)).epsilon(1e-9));
    // Strictly increasing until the CDF saturates in double precision.
    const double lo = weibull_cdf({scale, shape}, intensity);
    const double hi = weibull_cdf({scale, shape}, intensity + 1.0);
    CHECK((hi > lo || lo == 1.0));
  }
}

TEST_CASE("plm_estimate hand-evaluated product") {
  const auto set = make_set({{50, false, 0}, {60, true, 0}, {70, false, 0}, {80, true, 0}});
  const auto fn = plm_estimate(set);
  REQUIRE(fn.steps.size() == 2);
  CHECK(fn.steps[0].level == 60);
  CHECK(fn.steps[0].at_risk == 3);
  CHECK(fn.steps[0].survival == doctest::Approx(2.0 / 3.0));
  CHECK(fn.steps[1].level == 80);
  CHECK(fn.steps[1].at_risk == 1);
  CHECK(fn.steps[1].survival == doctest::Approx(0.0));
  CHECK(fn.survival_at(50.0) == 1.0);
  CHECK(fn.survival_at(65.0) == doctest::Approx(2.0 / 3.0));
  CHECK(fn.survival_at(80.0) == doctest::Approx(0.0));
  // Grouping: levels without breakdowns fold into the preceding step.
  CHECK(fn.steps[0].level_end == 79);
  CHECK(fn.steps[1].level_end == 80);
  CHECK(fn.steps[0].records_in_group == 2);  // the records at 60 and 70
}

TEST_CASE("plm_estimate with no failures is identically one") {
  const auto set = make_set({{50, false, 0}, {60, false, 0}, {90, false, 0}});
  const auto fn = plm_estimate(set);
  CHECK(fn.steps.empty());
  CHECK(fn.survival_at(95.0) == 1.0);
  CHECK_THROWS_AS(plm_estimate(ObservationSet{}), std::invalid_argument);
}

TEST_CASE("plm_estimate partial failure probabilities on grouped levels") {
  std::vector<Observation> obs;
  add_level(obs, 56, 2, 1035);
  add_level(obs, 60, 1, 5389);
  add_level(obs, 105, 1, 6);
  add_level(obs, 108, 1, 4);
  add_level(obs, 112, 1, 5);
  const auto fn = plm_estimate(make_set(std::move(obs)));
  REQUIRE(fn.steps.size() == 5);
  CHECK(fn.steps[0].at_risk == 6445);
  CHECK(fn.steps[0].breakdowns == 2);  // ties share one step
  CHECK(fn.steps[0].partial_failure == doctest::Approx(0.00031).epsilon(5e-3));
  CHECK(fn.steps[1].at_risk == 5408);
  CHECK(fn.steps[1].partial_failure == doctest::Approx(0.00018).epsilon(5e-3));
  CHECK(fn.steps[2].partial_failure == doctest::Approx(1.0 / 18.0));
  CHECK(fn.steps[3].partial_failure == doctest::Approx(1.0 / 11.0));
  CHECK(fn.steps[4].partial_failure == doctest::Approx(1.0 / 6.0));
  CHECK(fn.steps[1].level_end == 104);
  CHECK(fn.steps[1].records_in_group == 5390);
}

TEST_CASE("plm_estimate survival is non-increasing and within [0, 1]") {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Observation> obs;
    const int n = 20 + static_cast<int>(rng.next_u64() % 200);
    for (int i = 0; i < n; ++i) {
      obs.push_back({45 + static_cast<int>(rng.next_u64() % 60), rng.next_unit() < 0.15, 0});
    }
    const auto set = make_set(std::move(obs));
    if (set.breakdown_count() == 0) continue;
    const auto fn = plm_estimate(set);
    double previous = 1.0;
    for (const SurvivalStep& step : fn.steps) {
      CHECK(step.survival >= 0.0);
      CHECK(step.survival <= previous);
      previous = step.survival;
    }
  }
}

TEST_CASE("plm_estimate with zero censored records is the empirical CDF") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Observation> obs;
    const int n = 5 + static_cast<int>(rng.next_u64() % 40);
    for (int i = 0; i < n; ++i) {
      obs.push_back({50 + static_cast<int>(rng.next_u64() % 30), true, 0});
    }
    const auto set = make_set(std::move(obs));
    const auto fn = plm_estimate(set);
    for (int level = set.intensity_min; level <= set.intensity_max; ++level) {
      std::size_t above = 0;
      for (const Observation& o : set.observations) {
        if (o.intensity > level) ++above;
      }
      CHECK(fn.survival_at(level) ==
            doctest::Approx(static_cast<double>(above) / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("survival_to_cdf complements pointwise") {
  const auto set = make_set({{50, false, 0}, {60, true, 0}, {70, false, 0}, {80, true, 0}});
  const auto cdf = survival_to_cdf(plm_estimate(set));
  CHECK(cdf.at(55.0) == 0.0);
  CHECK(cdf.at(60.0) == doctest::Approx(1.0 / 3.0));
  CHECK(cdf.at(85.0) == doctest::Approx(1.0));
  // Complement identities from a published step table.
  CHECK(1.0 - 0.99945 == doctest::Approx(0.00055).epsilon(1e-9));
  CHECK(1.0 - 0.64231 == doctest::Approx(0.35769).epsilon(1e-9));
}

TEST_CASE("log_likelihood single-term identities") {
  // scale chosen so F(100) is exactly one half.
  const WeibullParams half{100.0 / std::log(2.0), 1.0};
  CHECK(weibull_cdf(half, 100.0) == doctest::Approx(0.5).epsilon(1e-12));
  const auto censored = make_set({{100, false, 0}});
  const auto uncensored = make_set({{100, true, 0}});
  CHECK(log_likelihood(half, censored, Likelihood::corrected) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-9));
  CHECK(log_likelihood(half, uncensored, Likelihood::corrected) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-9));
}

TEST_CASE("log_likelihood two-term value against an independent evaluation") {
  const WeibullParams params{146.42, 6.75};
  const auto set = make_set({{100, true, 0}, {90, false, 0}});
  // ln F(100) + ln(1 - F(90)) evaluated with independent arithmetic.
  CHECK(log_likelihood(params, set, Likelihood::corrected) ==
        doctest::Approx(-2.649154803717608).epsilon(1e-12));
}

TEST_CASE("log_likelihood is invariant under permutation") {
  Rng rng(17);
  std::vector<Observation> obs;
  for (int i = 0; i < 200; ++i) {
    obs.push_back({60 + static_cast<int>(rng.next_u64() % 60), rng.next_unit() < 0.05, 0});
  }
  auto set = make_set(obs);
  const WeibullParams params{130.0, 5.0};
  const double before = log_likelihood(params, set, Likelihood::corrected);
  std::reverse(set.observations.begin(), set.observations.end());
  CHECK(log_likelihood(params, set, Likelihood::corrected) == before);
}

TEST_CASE("log_likelihood stays finite under extreme parameters") {
  const auto set = make_set({{50, true, 0}, {200, false, 0}});
  for (const WeibullParams p : {WeibullParams{1e-6, 19.9}, WeibullParams{1e6, 19.9},
                                WeibullParams{150.0, 1e-3}, WeibullParams{150.0, 60.0}}) {
    CHECK(std::isfinite(log_likelihood(p, set, Likelihood::corrected)));
    CHECK(std::isfinite(log_likelihood(p, set, Likelihood::legacy)));
  }
}

TEST_CASE("log_likelihood is smooth in the parameters") {
  const auto synth = synth_observations(recovery_config(), 99);
  const auto& set = synth.observations;
  auto ll = [&](double ln_scale) {
    return log_likelihood({std::exp(ln_scale), 6.75}, set, Likelihood::corrected);
  };
  const double x = std::log(146.42);
  for (const double h : {1e-3, 5e-4}) {
    const double d1 = (ll(x + h) - ll(x - h)) / (2.0 * h);
    const double d1_half = (ll(x + h / 2.0) - ll(x - h / 2.0)) / h;
    CHECK(d1 == doctest::Approx(d1_half).epsilon(1e-3));
    const double d2 = (ll(x + h) - 2.0 * ll(x) + ll(x - h)) / (h * h);
    CHECK(std::isfinite(d2));
  }
  // Second differences agree across step sizes: no kinks in the surface.
  const double d2_a = (ll(x + 1e-3) - 2.0 * ll(x) + ll(x - 1e-3)) / 1e-6;
  const double d2_b = (ll(x + 5e-4) - 2.0 * ll(x) + ll(x - 5e-4)) / 2.5e-7;
  CHECK(d2_a == doctest::Approx(d2_b).epsilon(1e-2));
}

TEST_CASE("fit_mle recovers the generating parameters") {
  const auto synth = synth_observations(recovery_config(), 4242);
  REQUIRE(synth.observations.breakdown_count() >= 500);
  const auto fit = fit_mle(synth.observations, Likelihood::corrected);
  CHECK(fit.diagnostics.converged);
  CHECK(fit.diagnostics.iterations <= 500);
  CHECK(fit.params.scale == doctest::Approx(146.42).epsilon(0.02));
  CHECK(fit.params.shape == doctest::Approx(6.75).epsilon(0.10));
  // The optimum is a stationary point: nearby parameters do not improve.
  const double best = log_likelihood(fit.params, synth.observations, Likelihood::corrected);
  for (const double ds : {-1e-3, 1e-3}) {
    for (const double dg : {-1e-3, 1e-3}) {
      const WeibullParams nearby{fit.params.scale * (1.0 + ds),
                                 fit.params.shape * (1.0 + dg)};
      CHECK(log_likelihood(nearby, synth.observations, Likelihood::corrected) <= best + 1e-9);
    }
  }
}

TEST_CASE("legacy likelihood fits a steeper distribution than the truth") {
  const auto synth = synth_observations(recovery_config(), 777);
  const auto corrected = fit_mle(synth.observations, Likelihood::corrected);
  const auto legacy = fit_mle(synth.observations, Likelihood::legacy);
  const WeibullParams truth{146.42, 6.75};

  CHECK(legacy.params.shape > corrected.params.shape);
  // The legacy CDF deviates further from the generating CDF.
  double dev_corrected = 0.0;
  double dev_legacy = 0.0;
  for (int level = synth.observations.intensity_min;
       level <= synth.observations.intensity_max; ++level) {
    const double t = weibull_cdf(truth, level);
    dev_corrected = std::max(dev_corrected, std::abs(weibull_cdf(corrected.params, level) - t));
    dev_legacy = std::max(dev_legacy, std::abs(weibull_cdf(legacy.params, level) - t));
  }
  CHECK(dev_legacy > dev_corrected);
}

TEST_CASE("adding censored mass at a level cannot raise the fitted CDF there") {
  const auto synth = synth_observations(recovery_config(), 31);
  ObservationSet set = synth.observations;
  const int probe = (set.intensity_min + set.intensity_max) / 2;
  double previous = weibull_cdf(fit_mle(set, Likelihood::corrected).params,
                                static_cast<double>(probe));
  for (const int extra : {50, 200, 800}) {
    for (int i = 0; i < extra; ++i) set.observations.push_back({probe, false, 0});
    const double fitted = weibull_cdf(fit_mle(set, Likelihood::corrected).params,
                                      static_cast<double>(probe));
    CHECK(fitted <= previous + 1e-9);
    previous = fitted;
  }
}

TEST_CASE("fit_mle at a single intensity level matches the closed form") {
  // With every observation at one level the likelihood depends on the
  // parameters only through F(level); the maximum sits on the ridge
  // where F equals the breakdown fraction.
  std::vector<Observation> obs;
  for (int i = 0; i < 40; ++i) obs.push_back({80, false, 0});
  for (int i = 0; i < 10; ++i) obs.push_back({80, true, 0});
  const auto set = make_set(std::move(obs));
  const auto fit = fit_mle(set, Likelihood::corrected);
  CHECK(weibull_cdf(fit.params, 80.0) == doctest::Approx(0.2).epsilon(1e-4));
}

TEST_CASE("fit_mle rejects degenerate input") {
  CHECK_THROWS_AS(fit_mle(make_set({{50, false, 0}, {60, false, 0}}),
                          Likelihood::corrected),
                  EstimationError);
  CHECK_THROWS_AS(fit_mle(make_set({{50, true, 0}, {60, true, 0}}),
                          Likelihood::corrected),
                  EstimationError);
  try {
    fit_mle(make_set({{50, false, 0}}), Likelihood::corrected);
    FAIL("expected EstimationError");
  } catch (const EstimationError& e) {
    CHECK(std::string(e.what()).find("degenerate") != std::string::npos);
  }
}
