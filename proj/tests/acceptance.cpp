// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Runs the statistical replication studies at desk scale
// and drives the CLI end to end.
//
// Usage: acceptance_tests --cli <path-to-uwarma-binary> --schema <schema.json>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "uwarma/uwarma.hpp"

namespace fs = std::filesystem;
using namespace uwarma;

namespace {

std::string g_cli;
std::string g_schema;
fs::path g_tmp;

struct Outcome {
  bool passed = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int g_failures = 0;

void run_criterion(const std::string& name, double time_cap_s,
                   const std::function<void(Outcome&)>& body) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_cap_s > 0.0 && secs > time_cap_s) {
    out.passed = false;
    out.detail += (out.detail.empty() ? "" : "; ");
    out.detail += "runtime " + std::to_string(secs) + "s exceeds cap " +
                  std::to_string(time_cap_s) + "s";
  }
  if (!out.passed) ++g_failures;
  std::printf("%s  %-28s %7.1fs%s%s\n", out.passed ? "PASS" : "FAIL", name.c_str(), secs,
              out.detail.empty() ? "" : "  -- ", out.detail.c_str());
  std::fflush(stdout);
}

int run_cli(const std::string& args, std::string* stdout_path = nullptr) {
  static int counter = 0;
  fs::path out = g_tmp / ("cli_out_" + std::to_string(counter++) + ".txt");
  std::string cmd = g_cli + " " + args + " >" + out.string() + " 2>&1";
  int ret = std::system(cmd.c_str());
  if (stdout_path) *stdout_path = out.string();
  if (ret == -1) return -1;
  return WIFEXITED(ret) ? WEXITSTATUS(ret) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Gradient oracle
// ---------------------------------------------------------------------------

void gradient_oracle(Outcome& out) {
  Rng pick(12345);
  const LinkKind links[] = {LinkKind::logit, LinkKind::probit, LinkKind::loglog,
                            LinkKind::cloglog};
  int checked = 0;
  for (int cfg = 0; cfg < 20; ++cfg) {
    const int p = static_cast<int>(pick.uniform01() * 3);  // 0..2
    const int q = static_cast<int>(pick.uniform01() * 3);
    const int r = static_cast<int>(pick.uniform01() * 3);
    const double rho = 0.2 + 0.6 * pick.uniform01();
    const LinkKind link = links[static_cast<int>(pick.uniform01() * 4) % 4];
    ModelSpec spec(p, q, rho, link, r);

    std::vector<double> phi(p), theta(q), beta(r);
    for (int i = 0; i < p; ++i) phi[i] = (0.5 - 0.2 * i) * (pick.uniform01() > 0.5 ? 1 : -1);
    for (int i = 0; i < q; ++i) theta[i] = (0.4 - 0.15 * i) * (pick.uniform01() > 0.5 ? 1 : -1);
    for (int i = 0; i < r; ++i) beta[i] = 0.3 + 0.2 * pick.uniform01();
    ParamVector truth(0.1 * (2.0 * pick.uniform01() - 1.0), beta, phi, theta,
                      3.0 + 6.0 * pick.uniform01());

    Matrix xfull;
    if (r > 0) {
      xfull = Matrix(200 + 500, r);
      for (std::size_t t = 0; t < xfull.rows; ++t)
        for (int j = 0; j < r; ++j)
          xfull(t, j) = 0.6 * std::sin(0.23 * static_cast<double>(t) + 0.9 * j);
    }
    SimulateOptions so;
    so.burnin = 200;
    SeriesData data = simulate(spec, truth, xfull, 500, 555000 + cfg, so).data;

    std::vector<double> at = truth.to_flat();
    for (std::size_t j = 0; j < at.size(); ++j) {
      at[j] += 0.06 * (pick.uniform01() - 0.5);
    }
    at.back() = std::max(1.5, at.back() + 0.4 * (pick.uniform01() - 0.5));

    ScoreOutput sc = score(spec, ParamVector::from_flat(spec, at), data);
    auto fd = oracles::fd_gradient(
        [&](const std::vector<double>& v) {
          return partial_loglik(spec, ParamVector::from_flat(spec, v), data);
        },
        at, 1e-6);
    for (std::size_t j = 0; j < at.size(); ++j) {
      const double denom = std::max({1.0, std::abs(sc.grad[j]), std::abs(fd[j])});
      const double rel = std::abs(sc.grad[j] - fd[j]) / denom;
      out.require(rel < 1e-5, "config " + std::to_string(cfg) + " param " + std::to_string(j) +
                                  " rel err " + std::to_string(rel));
      ++checked;
    }
  }
  out.require(checked > 100, "too few comparisons ran");
}

// ---------------------------------------------------------------------------
// 2. Lemma expectations oracle
// ---------------------------------------------------------------------------

void lemma_oracle(Outcome& out) {
  const LogRatioMoment moments[] = {LogRatioMoment::pow_lambda, LogRatioMoment::log_ratio,
                                    LogRatioMoment::pow_lambda_log,
                                    LogRatioMoment::pow_lambda_log_sq};
  auto integrand = [](LogRatioMoment which, double y, const UWParams& p) {
    const double a = std::log(y) / std::log(p.mu);
    const double la = std::log(a);
    const double apow = std::pow(a, p.lambda);
    switch (which) {
      case LogRatioMoment::pow_lambda: return apow;
      case LogRatioMoment::log_ratio: return la;
      case LogRatioMoment::pow_lambda_log: return apow * la;
      case LogRatioMoment::pow_lambda_log_sq: return apow * la * la;
    }
    return 0.0;
  };

  std::uint64_t seed = 777;
  for (double lambda : {1.0, 2.0, 5.0}) {
    for (double rho : {0.25, 0.5, 0.75}) {
      UWParams p(0.45, lambda, rho);
      auto draws = sample(p, 1000000, seed++);
      for (auto which : moments) {
        const double closed = log_ratio_expectation(which, p);
        const double quad = oracles::integrate(
            [&](double y) { return integrand(which, y, p) * pdf(y, p); }, 0.0, 1.0,
            1e-12);
        out.require(std::abs(closed - quad) < 1e-7,
                    "quadrature gap " + std::to_string(std::abs(closed - quad)) + " at lambda=" +
                        std::to_string(lambda) + " rho=" + std::to_string(rho));

        std::vector<double> vals(draws.size());
        for (std::size_t i = 0; i < draws.size(); ++i) vals[i] = integrand(which, draws[i], p);
        auto ms = oracles::mean_sd(vals);
        out.require(std::abs(closed - ms.mean) < 4.0 * ms.se,
                    "MC gap " + std::to_string((closed - ms.mean) / ms.se) + " se at lambda=" +
                        std::to_string(lambda) + " rho=" + std::to_string(rho));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 3. Information matrix oracle
// ---------------------------------------------------------------------------

void info_matrix_oracle(Outcome& out) {
  struct Point {
    double mu, lambda, rho;
  };
  const Point points[] = {{0.5, 5.0, 0.5}, {0.62, 2.0, 0.25}, {0.35, 8.0, 0.75}};

  std::uint64_t seed = 4242;
  for (const auto& pt : points) {
    // library-side entries, extracted through the public surface: for an
    // intercept-only model with n=1 and mu pinned at mu0,
    //   K = [[T^2 Emu, T e], [T e, Kll]],  T = 1/g'(mu0)
    const LinkKind link = LinkKind::logit;
    ModelSpec spec(0, 0, pt.rho, link);
    ParamVector gamma(link_eval(link, pt.mu), {}, {}, {}, pt.lambda);
    SeriesData one;
    one.y = {0.5};
    Matrix K = info_matrix(spec, gamma, one).K;
    const double gp = link_deriv(link, pt.mu);
    const double lib_emu = K(0, 0) * gp * gp;
    const double lib_e = K(0, 1) * gp;
    const double lib_kll = K(1, 1);

    // oracle side: exact per-draw second derivatives of the log density,
    // validated against finite differences, then averaged over redraws
    const UWParams up(pt.mu, pt.lambda, pt.rho);
    const double log_mu = std::log(pt.mu);
    const double log_rho = std::log(pt.rho);
    auto d2_mu = [&](double y) {
      const double a = std::log(y) / log_mu;
      const double apow = std::pow(a, pt.lambda);
      return (pt.lambda * (log_mu + 1.0) * (1.0 + log_rho * apow) +
              pt.lambda * pt.lambda * log_rho * apow) /
             (pt.mu * pt.mu * log_mu * log_mu);
    };
    auto d2_cross = [&](double y) {
      const double a = std::log(y) / log_mu;
      const double apow = std::pow(a, pt.lambda);
      return -(1.0 + log_rho * apow + pt.lambda * log_rho * apow * std::log(a)) /
             (pt.mu * log_mu);
    };
    auto d2_lam = [&](double y) {
      const double a = std::log(y) / log_mu;
      const double la = std::log(a);
      return log_rho * std::pow(a, pt.lambda) * la * la -
             1.0 / (pt.lambda * pt.lambda);
    };

    // spot-validate the closed derivatives against finite differences
    for (double y : {0.21, 0.52, 0.83}) {
      const double h = 2e-5;
      auto l_mu = [&](double m) { return log_pdf(y, UWParams(m, pt.lambda, pt.rho)); };
      auto l_lam = [&](double l) { return log_pdf(y, UWParams(pt.mu, l, pt.rho)); };
      double fd_mu2 = (l_mu(pt.mu + h) - 2.0 * l_mu(pt.mu) + l_mu(pt.mu - h)) / (h * h);
      double fd_lam2 = (l_lam(pt.lambda + h) - 2.0 * l_lam(pt.lambda) + l_lam(pt.lambda - h)) /
                       (h * h);
      double fd_cross = (log_pdf(y, UWParams(pt.mu + h, pt.lambda + h, pt.rho)) -
                         log_pdf(y, UWParams(pt.mu + h, pt.lambda - h, pt.rho)) -
                         log_pdf(y, UWParams(pt.mu - h, pt.lambda + h, pt.rho)) +
                         log_pdf(y, UWParams(pt.mu - h, pt.lambda - h, pt.rho))) /
                        (4.0 * h * h);
      out.require(std::abs(fd_mu2 - d2_mu(y)) < 1e-3 * std::max(1.0, std::abs(fd_mu2)),
                  "mu2 formula vs FD");
      out.require(std::abs(fd_lam2 - d2_lam(y)) < 1e-3 * std::max(1.0, std::abs(fd_lam2)),
                  "lam2 formula vs FD");
      out.require(std::abs(fd_cross - d2_cross(y)) < 1e-3 * std::max(1.0, std::abs(fd_cross)),
                  "cross formula vs FD");
    }

    auto draws = sample(up, 100000, seed++);
    std::vector<double> vmu(draws.size()), vcross(draws.size()), vlam(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
      vmu[i] = d2_mu(draws[i]);
      vcross[i] = d2_cross(draws[i]);
      vlam[i] = d2_lam(draws[i]);
    }
    auto m1 = oracles::mean_sd(vmu);
    auto m2 = oracles::mean_sd(vcross);
    auto m3 = oracles::mean_sd(vlam);
    // the information entries are minus the conditional expectations
    out.require(std::abs(lib_emu + m1.mean) < 4.0 * m1.se,
                "Emu gap " + std::to_string((lib_emu + m1.mean) / m1.se) + " se");
    out.require(std::abs(lib_e + m2.mean) < 4.0 * m2.se,
                "e gap " + std::to_string((lib_e + m2.mean) / m2.se) + " se");
    out.require(std::abs(lib_kll + m3.mean) < 4.0 * m3.se,
                "Kll gap " + std::to_string((lib_kll + m3.mean) / m3.se) + " se");
  }
}

// ---------------------------------------------------------------------------
// 4. Estimation study replication (desk scale)
// ---------------------------------------------------------------------------

void table1_replication(Outcome& out) {
  StudyConfig cfg;
  cfg.replicas = 100;
  cfg.n = 1000;
  cfg.rho = 0.5;
  cfg.lambda = 5.0;
  cfg.phi = {0.6};
  cfg.theta = {0.4};
  cfg.burnin = 1000;
  cfg.base_seed = 91000;
  StudySummary s = run_estimation_study(cfg);
  out.require(s.failures == 0, std::to_string(s.failures) + " replicas failed");

  // flat order: alpha, phi, theta, lambda
  const double ref_mean[3] = {0.600, 0.400, 5.007};
  const double ref_sd[3] = {0.026, 0.029, 0.127};
  const char* names[3] = {"phi", "theta", "lambda"};
  for (int k = 0; k < 3; ++k) {
    const double mean = s.mean[1 + k];
    const double sd = s.sd[1 + k];
    const double mean_tol = 3.0 * ref_sd[k] / std::sqrt(100.0);
    out.require(std::abs(mean - ref_mean[k]) <= mean_tol,
                std::string(names[k]) + " mean " + std::to_string(mean) + " vs " +
                    std::to_string(ref_mean[k]) + " (tol " + std::to_string(mean_tol) + ")");
    out.require(std::abs(sd - ref_sd[k]) <= 0.35 * ref_sd[k],
                std::string(names[k]) + " sd " + std::to_string(sd) + " vs " +
                    std::to_string(ref_sd[k]));
  }
}

// ---------------------------------------------------------------------------
// 5. Forecast study replication (desk scale)
// ---------------------------------------------------------------------------

void table3_replication(Outcome& out) {
  StudyConfig cfg;
  cfg.replicas = 100;
  cfg.n = 1000;
  cfg.rho = 0.5;
  cfg.lambda = 5.0;
  cfg.phi = {0.6};
  cfg.theta = {0.4};
  cfg.alpha = 0.5;
  cfg.beta = 0.5;
  // the published study's sinusoid phase at the forecast origin, identified
  // by matching its full MAPE-by-horizon fingerprint across quantile levels
  cfg.covariate_time_offset = 10;
  cfg.burnin = 1000;
  cfg.base_seed = 92000;
  ForecastStudyResult r = run_forecast_study(cfg, {1, 6, 12, 18, 24});
  out.require(r.failures == 0, std::to_string(r.failures) + " replicas failed");
  out.require(std::abs(r.avg_mape.front() - 0.068) <= 0.015,
              "MAPE(h=1) " + std::to_string(r.avg_mape.front()) + " vs 0.068 +/- 0.015");
  out.require(std::abs(r.avg_mape.back() - 0.074) <= 0.015,
              "MAPE(h=24) " + std::to_string(r.avg_mape.back()) + " vs 0.074 +/- 0.015");
  out.require(r.avg_mape.front() <= r.avg_mape.back(),
              "MAPE should not shrink with the horizon on average");
}

// ---------------------------------------------------------------------------
// 6. Wald coverage as the desk-scale normality check
// ---------------------------------------------------------------------------

void wald_coverage(Outcome& out) {
  StudyConfig cfg;
  cfg.replicas = 500;
  cfg.n = 1000;
  cfg.rho = 0.5;
  cfg.lambda = 5.0;
  cfg.phi = {0.6};
  cfg.theta = {0.4};
  cfg.burnin = 1000;
  cfg.base_seed = 93000;
  StudySummary s = run_estimation_study(cfg);
  const double z = 1.959963984540054;
  std::size_t covered = 0, usable = 0;
  for (const auto& rec : s.replicas) {
    if (!rec.ok || std::isnan(rec.se[1])) continue;
    ++usable;
    if (std::abs(rec.estimate[1] - 0.6) <= z * rec.se[1]) ++covered;
  }
  out.require(usable >= 490, "only " + std::to_string(usable) + " usable replicas");
  const double cov = static_cast<double>(covered) / static_cast<double>(usable);
  out.require(cov >= 0.92 && cov <= 0.98,
              "coverage " + std::to_string(cov) + " outside [0.92, 0.98]");
}

// ---------------------------------------------------------------------------
// 7. Round-trip suite
// ---------------------------------------------------------------------------

void round_trips(Outcome& out) {
  // cdf/quantile inverse within 1e-12
  for (double mu : {0.2, 0.5, 0.8}) {
    for (double lambda : {0.7, 1.0, 5.0}) {
      for (double rho : {0.25, 0.5, 0.9}) {
        UWParams p(mu, lambda, rho);
        for (int i = 1; i <= 99; i += 7) {
          const double u = i / 100.0;
          out.require(std::abs(cdf(quantile(u, p), p) - u) < 1e-12, "cdf/quantile round trip");
        }
        out.require(quantile(rho, p) == mu, "quantile(rho) == mu exact");
      }
    }
  }
  // link round trips within 1e-10
  for (LinkKind k : {LinkKind::logit, LinkKind::probit, LinkKind::loglog, LinkKind::cloglog}) {
    for (double mu = 1e-6; mu < 1.0; mu += 0.01) {
      out.require(std::abs(link_inv(k, link_eval(k, mu)) - mu) < 1e-10, "link round trip");
    }
  }
  // simulate -> filter bit equality
  {
    ModelSpec spec(1, 1, 0.25, LinkKind::logit);
    ParamVector gamma(0.05, {}, {0.5}, {0.3}, 6.0);
    SimulateOptions so;
    so.burnin = 0;
    SimOutput sim = simulate(spec, gamma, {}, 800, 31415, so);
    FilterOutput f = filter_series(spec, gamma, sim.data);
    bool equal = f.mu.size() == sim.mu.size();
    for (std::size_t t = 0; equal && t < f.mu.size(); ++t) equal = (f.mu[t] == sim.mu[t]);
    out.require(equal, "simulate->filter mu sequences not bit-equal");
  }
  // save -> load -> forecast reproducibility
  {
    ModelSpec spec(1, 1, 0.5, LinkKind::logit);
    ParamVector truth(0.0, {}, {0.6}, {0.4}, 5.0);
    SimulateOptions so;
    so.burnin = 500;
    SimOutput sim = simulate(spec, truth, {}, 600, 2718, so);
    FitResult fit = fit_pmle(spec, sim.data);
    out.require(fit.converged, "reference fit did not converge");
    ordered_json j = fit_result_to_json(fit, {}, 0.95, "fit");
    const std::string path = (g_tmp / "roundtrip_fit.json").string();
    write_text_file(path, j.dump(2) + "\n");
    LoadedModel model = load_model_file(path);
    auto fc1 = forecast_ahead(spec, fit.gamma_hat, sim.data, 12);
    auto fc2 = forecast_ahead(model.spec, model.gamma, sim.data, 12);
    out.require(fc1.yhat == fc2.yhat, "reloaded model gives different forecasts");
    // schema check and byte-stable rewrite
    std::string err;
    out.require(validate_against_schema(ordered_json::parse(read_text_file(path)),
                                        ordered_json::parse(read_text_file(g_schema)), &err),
                "schema: " + err);
    ordered_json j2 = ordered_json::parse(read_text_file(path));
    out.require(j2.dump(2) + "\n" == read_text_file(path), "rewrite is not byte-identical");
  }
}

// ---------------------------------------------------------------------------
// 8. Quantile-level path ordering (identical seeds)
// ---------------------------------------------------------------------------

void path_ordering(Outcome& out) {
  ParamVector gamma(0.0, {}, {0.4}, {0.6}, 6.0);
  SimulateOptions so;
  so.burnin = 1000;
  SimOutput lo = simulate(ModelSpec(1, 1, 0.1, LinkKind::logit), gamma, {}, 500, 60601, so);
  SimOutput hi = simulate(ModelSpec(1, 1, 0.9, LinkKind::logit), gamma, {}, 500, 60601, so);
  int above = 0;
  for (std::size_t t = 0; t < 500; ++t)
    if (lo.data.y[t] > hi.data.y[t]) ++above;
  out.require(above > 350, "low-rho path above high-rho path at only " +
                               std::to_string(above) + "/500 points");
}

// ---------------------------------------------------------------------------
// 9. CLI end to end, including the rolling-window evaluation
// ---------------------------------------------------------------------------

void cli_end_to_end(Outcome& out) {
  const std::string sim1 = (g_tmp / "sim1.csv").string();
  const std::string sim2 = (g_tmp / "sim2.csv").string();
  const std::string base = "simulate --n 2000 --rho 0.5 --lambda 5 --phi 0.6 --theta 0.4 "
                           "--seed 7 --burnin 1000 --out ";
  out.require(run_cli(base + sim1) == 0, "simulate exit code");
  out.require(run_cli(base + sim2) == 0, "simulate exit code (second run)");
  out.require(slurp(sim1) == slurp(sim2), "identical flags+seed gave different CSVs");

  // fit on the tool's own output recovers the AR coefficient
  const std::string fitjson = (g_tmp / "fit.json").string();
  int fit_rc = run_cli("fit --data " + sim1 + " --p 1 --q 1 --rho 0.5 --out " + fitjson);
  out.require(fit_rc == 0, "fit exit code " + std::to_string(fit_rc));
  ordered_json fj = ordered_json::parse(read_text_file(fitjson));
  const double phi_hat = fj["estimates"]["phi"][0].get<double>();
  const double phi_se = fj["se"]["phi"][0].get<double>();
  out.require(std::abs(phi_hat - 0.6) < 3.0 * phi_se, "phi_hat " + std::to_string(phi_hat));

  // forecast from the saved model file
  const std::string fcjson = (g_tmp / "fc.json").string();
  out.require(run_cli("forecast --model " + fitjson + " --data " + sim1 + " --h 6 --out " +
                      fcjson) == 0,
              "forecast exit code");
  ordered_json fc = ordered_json::parse(read_text_file(fcjson));
  out.require(fc["yhat"].size() == 6, "forecast horizon");

  // usage and validation exit codes
  out.require(run_cli("fit --no-such-flag") == 2, "usage error should exit 2");
  const std::string bad = (g_tmp / "bad.csv").string();
  write_text_file(bad, "y\n0.5\n1.0\n");
  out.require(run_cli("fit --data " + bad + " --p 1") == 3, "boundary y should exit 3");

  // a starved optimizer must still write its result, flagged, with exit 4
  const std::string starved = (g_tmp / "starved.json").string();
  int rc4 = run_cli("fit --data " + sim1 + " --p 1 --q 1 --max-iter 1 --grad-tol 1e-15 "
                    "--loglik-tol 0 --out " + starved);
  out.require(rc4 == 4, "non-convergence should exit 4, got " + std::to_string(rc4));
  ordered_json sj = ordered_json::parse(read_text_file(starved));
  out.require(sj["diagnostics"]["converged"].get<bool>() == false,
              "starved fit should be flagged unconverged");

  // mc subcommand on a tiny config
  const std::string cfg = (g_tmp / "study.cfg").string();
  write_text_file(cfg, "study=estimation\nreplicas=4\nn=300\nburnin=200\nrho=0.5\nlambda=5\n"
                       "phi=0.6\ntheta=0.4\nseed=11\n");
  const std::string mcpre = (g_tmp / "mc").string();
  out.require(run_cli("mc --config " + cfg + " --out " + mcpre) == 0, "mc exit code");
  out.require(fs::exists(mcpre + "_summary.csv") && fs::exists(mcpre + "_replicas.csv") &&
                  fs::exists(mcpre + "_summary.json"),
              "mc outputs missing");

  // rolling-window evaluation on a synthetic 389-point, 7-covariate dataset
  {
    ModelSpec spec(1, 0, 0.5, LinkKind::logit, 7);
    std::vector<double> beta{0.3, -0.2, 0.15, 0.0, 0.0, 0.1, -0.05};
    ParamVector gamma(0.8, beta, {0.5}, {}, 8.0);
    const std::size_t n = 389, burn = 300;
    Matrix X(n + burn, 7);
    Rng xr(2022);
    for (std::size_t t = 0; t < X.rows; ++t) {
      for (int j = 0; j < 7; ++j) {
        X(t, j) = 0.4 * std::sin(0.05 * (j + 1) * static_cast<double>(t)) +
                  0.2 * (2.0 * xr.uniform01() - 1.0);
      }
    }
    SimulateOptions so;
    so.burnin = burn;
    SimOutput sim = simulate(spec, gamma, X, n, 670, so);
    LoadedSeries series;
    series.data = sim.data;
    for (int j = 0; j < 7; ++j) series.covariate_names.push_back("v" + std::to_string(j + 1));
    const std::string rollcsv = (g_tmp / "roll.csv").string();
    save_series_csv(rollcsv, series);

    const std::string pre = (g_tmp / "roll").string();
    int rc = run_cli("rollfc --data " + rollcsv + " --window 287 --h 6 --p 1 --q 0 "
                     "--lags 1 --pmax 0.05 --out " + pre);
    out.require(rc == 0, "rollfc exit code " + std::to_string(rc));

    std::ifstream mf(pre + "_mape.csv");
    std::string header, row, extra;
    out.require(static_cast<bool>(std::getline(mf, header)), "mape table missing");
    out.require(header == "model,t+1,t+2,t+3,t+4,t+5,t+6",
                "unexpected mape header: " + header);
    out.require(static_cast<bool>(std::getline(mf, row)), "mape table empty");
    auto fields = uwarma::detail::split_csv_line(row);
    out.require(fields.size() == 7, "mape row has " + std::to_string(fields.size()) +
                                        " fields");
    out.require(fields[0] == "UWARMA(1,0)", "model label " + fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      double v = std::stod(fields[k]);
      out.require(v > 0.0 && v < 1.0, "MAPE column " + std::to_string(k) + " out of range");
    }
    out.require(!std::getline(mf, extra), "mape table should have exactly one model row");

    // backward elimination over the lag expansion via the select subcommand
    const std::string seljson = (g_tmp / "sel.json").string();
    int sel_rc = run_cli("select --data " + rollcsv + " --p 1 --q 0 --lags 2 --pmax 0.05 "
                         "--out " + seljson);
    out.require(sel_rc == 0, "select exit code " + std::to_string(sel_rc));
    ordered_json sel = ordered_json::parse(read_text_file(seljson));
    out.require(sel.contains("selection") && sel["selection"]["trace"].is_array(),
                "select output lacks an elimination trace");
    bool lag_names = true;
    for (const auto& name : sel["selection"]["kept"]) {
      lag_names = lag_names && name.get<std::string>().find("_lag") != std::string::npos;
    }
    out.require(lag_names, "surviving covariates should carry _lag names");
    std::string serr;
    out.require(validate_against_schema(sel, ordered_json::parse(read_text_file(g_schema)),
                                        &serr),
                "select schema: " + serr);
  }
}

// ---------------------------------------------------------------------------
// 10. Backward-elimination power
// ---------------------------------------------------------------------------

void elimination_power(Outcome& out) {
  const int replicas = 200;
  int noise_first = 0, ran = 0;
  ModelSpec spec(1, 0, 0.5, LinkKind::logit, 2);
  ParamVector gamma(0.0, {0.6, 0.0}, {0.4}, {}, 5.0);
  const std::size_t n = 500, burn = 300;
  for (int i = 0; i < replicas; ++i) {
    Rng noise(40000 + i);
    Matrix X(n + burn, 2);
    for (std::size_t t = 0; t < n + burn; ++t) {
      X(t, 0) = seasonal_sine(static_cast<long>(t) - static_cast<long>(burn) + 1);
      X(t, 1) = 2.0 * noise.uniform01() - 1.0;
    }
    SimulateOptions so;
    so.burnin = burn;
    try {
      SimOutput sim = simulate(spec, gamma, X, n, 50000 + i, so);
      auto res = backward_eliminate(spec, sim.data, {"signal", "noise"}, 0.05);
      ++ran;
      if (!res.trace.empty() && res.trace.front().name == "noise") ++noise_first;
    } catch (const std::exception&) {
    }
  }
  out.require(ran >= 195, "only " + std::to_string(ran) + " replicas ran");
  out.require(noise_first >= 0.9 * ran,
              "noise removed first in " + std::to_string(noise_first) + "/" +
                  std::to_string(ran));
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--cli") g_cli = argv[i + 1];
    if (key == "--schema") g_schema = argv[i + 1];
  }
  if (g_cli.empty() || g_schema.empty()) {
    std::cerr << "usage: acceptance_tests --cli <uwarma binary> --schema <result_schema.json>\n";
    return 2;
  }
  g_tmp = fs::temp_directory_path() / ("uwarma_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(g_tmp);

  run_criterion("gradient_oracle", 30.0, gradient_oracle);
  run_criterion("lemma_oracle", 60.0, lemma_oracle);
  run_criterion("info_matrix_oracle", 120.0, info_matrix_oracle);
  run_criterion("table1_replication", 0.0, table1_replication);
  run_criterion("table3_replication", 0.0, table3_replication);
  run_criterion("wald_coverage", 0.0, wald_coverage);
  run_criterion("round_trip_suite", 0.0, round_trips);
  run_criterion("path_ordering", 0.0, path_ordering);
  run_criterion("cli_end_to_end", 0.0, cli_end_to_end);
  run_criterion("elimination_power", 0.0, elimination_power);

  std::error_code ec;
  fs::remove_all(g_tmp, ec);
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
