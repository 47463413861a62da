#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "uwarma/mc.hpp"

using namespace uwarma;

TEST_SUITE("mc") {

TEST_CASE("study is deterministic under (config, base_seed)") {
  StudyConfig cfg;
  cfg.replicas = 5;
  cfg.n = 300;
  cfg.burnin = 200;
  cfg.base_seed = 42;
  auto a = run_estimation_study(cfg);
  auto b = run_estimation_study(cfg);
  REQUIRE(a.replicas.size() == b.replicas.size());
  for (std::size_t i = 0; i < a.replicas.size(); ++i) {
    CHECK(a.replicas[i].estimate == b.replicas[i].estimate);
    CHECK(a.replicas[i].seed == cfg.base_seed + i);
  }
  CHECK(a.mean == b.mean);

  cfg.jobs = 3;  // threading must not change anything
  auto c = run_estimation_study(cfg);
  for (std::size_t i = 0; i < a.replicas.size(); ++i) {
    CHECK(a.replicas[i].estimate == c.replicas[i].estimate);
  }
}

TEST_CASE("degenerate intercept-only study recovers alpha") {
  StudyConfig cfg;
  cfg.replicas = 20;
  cfg.n = 500;
  cfg.burnin = 100;
  cfg.phi = {};
  cfg.theta = {};
  cfg.alpha = 0.25;
  cfg.base_seed = 77;
  auto s = run_estimation_study(cfg);
  CHECK(s.failures == 0);
  // alpha is the first flat parameter
  CHECK(std::abs(s.mean[0] - 0.25) < 3.0 * s.sd[0] / std::sqrt(20.0));
  CHECK(s.param_names.front() == "alpha");
  CHECK(s.param_names.back() == "lambda");
}

TEST_CASE("estimate dispersion shrinks like root-n; asymptotics kick in") {
  std::vector<StudySummary> studies;
  for (std::size_t n : {250u, 500u, 1000u}) {
    StudyConfig cfg;
    cfg.replicas = 150;
    cfg.n = n;
    cfg.burnin = 500;
    cfg.base_seed = 300 + n;
    studies.push_back(run_estimation_study(cfg));
    CHECK(studies.back().failures <= 2);
  }
  // sd shrinks roughly like 1/sqrt(n) per doubling
  for (int step = 0; step < 2; ++step) {
    double ratio = studies[step + 1].sd[1] / studies[step].sd[1];  // phi
    CHECK(ratio > 0.55);
    CHECK(ratio < 0.90);
  }
  // bias at n=1000 is no worse than at n=250 (phi, theta, lambda)
  for (std::size_t j : {1u, 2u, 3u}) {
    CHECK(std::abs(studies[2].bias[j]) <= std::abs(studies[0].bias[j]) + 0.002);
  }
  // the MC dispersion of the estimates matches the inverse-information
  // standard errors at n=1000 (within 15%)
  const auto& big = studies[2];
  for (std::size_t j : {1u, 2u, 3u}) {
    double mean_se = 0.0;
    std::size_t cnt = 0;
    for (const auto& rec : big.replicas) {
      if (!rec.ok || std::isnan(rec.se[j])) continue;
      mean_se += rec.se[j];
      ++cnt;
    }
    mean_se /= static_cast<double>(cnt);
    CAPTURE(j);
    CHECK(big.sd[j] / mean_se > 0.85);
    CHECK(big.sd[j] / mean_se < 1.15);
  }
}

TEST_CASE("forecast study wiring: near-deterministic limit and horizons") {
  // sampler concentration check first: at lambda=200 the draw hugs mu
  auto draws = sample(UWParams(0.6, 200.0, 0.5), 20000, 5);
  auto ms = oracles::mean_sd(draws);
  CHECK(ms.sd < 0.01);

  // forecasting with the generating parameters in the same regime
  ModelSpec spec(1, 1, 0.5, LinkKind::logit, 1);
  ParamVector gamma(0.5, {0.5}, {0.6}, {0.4}, 200.0);
  const std::size_t n = 300, burn = 300;
  Matrix X(burn + n + 24, 1);
  for (std::size_t k = 0; k < X.rows; ++k)
    X(k, 0) = seasonal_sine(static_cast<long>(k) - static_cast<long>(burn) + 1);
  std::vector<double> apes;
  for (int rep = 0; rep < 30; ++rep) {
    SimulateOptions opts;
    opts.burnin = burn;
    auto sim = simulate(spec, gamma, X, n + 24, 800 + rep, opts);
    SeriesData train;
    train.y.assign(sim.data.y.begin(), sim.data.y.begin() + n);
    train.X = Matrix(n, 1);
    for (std::size_t t = 0; t < n; ++t) train.X(t, 0) = sim.data.X(t, 0);
    Matrix xf(24, 1);
    for (int k = 0; k < 24; ++k) xf(k, 0) = sim.data.X(n + k, 0);
    auto fc = forecast_ahead(spec, gamma, train, 24, xf);
    apes.push_back(std::abs(sim.data.y[n] - fc.yhat[0]) / sim.data.y[n]);
  }
  auto m = oracles::mean_sd(apes);
  CHECK(m.mean < 0.01);
}

TEST_CASE("forecast study aggregates per-horizon errors") {
  StudyConfig cfg;
  cfg.replicas = 10;
  cfg.n = 400;
  cfg.burnin = 300;
  cfg.alpha = 0.5;
  cfg.beta = 0.5;
  cfg.base_seed = 2;
  auto r = run_forecast_study(cfg, {1, 6, 12, 18, 24});
  CHECK(r.failures == 0);
  CHECK(r.avg_mape.size() == 5);
  for (double v : r.avg_mape) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  CHECK(r.ape.rows == 10);
  CHECK(r.ape.cols == 24);  // per-lead errors up to the largest horizon
  // MAPE at horizon h averages the first h leads: reconstruct and compare
  double run = 0.0;
  for (int k = 0; k < 24; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < 10; ++i) s += r.ape(i, k);
    run += s / 10.0;
  }
  CHECK(r.avg_mape.back() == doctest::Approx(run / 24.0).epsilon(1e-12));
  // estimates were aggregated alongside
  CHECK(r.estimates.param_names[1] == "x_sin");
  CHECK(std::abs(r.estimates.mean[1] - 0.5) < 0.2);
}

TEST_CASE("config validation") {
  StudyConfig cfg;
  cfg.replicas = 0;
  CHECK_THROWS_AS(run_estimation_study(cfg), std::invalid_argument);
  StudyConfig cfg2;
  CHECK_THROWS_AS(run_forecast_study(cfg2, {}), std::invalid_argument);
  CHECK_THROWS_AS(run_forecast_study(cfg2, {0}), std::invalid_argument);
}

}  // TEST_SUITE
