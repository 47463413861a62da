#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwarma/inference.hpp"
#include "uwarma/linalg.hpp"
#include "uwarma/model.hpp"
#include "uwarma/normal.hpp"
#include "uwarma/optimize.hpp"

namespace uwarma {

struct FitOptions {
  int max_iter = 500;
  /// convergence: score max-norm below this in the natural parameterization
  double grad_tol = 1e-6;
  /// ... or relative log-likelihood improvement below this
  double loglik_rel_tol = 1e-10;
  int verbosity = 0;
};

struct FitResult {
  ModelSpec spec;
  ParamVector gamma_hat;
  double loglik = -std::numeric_limits<double>::infinity();
  Matrix info;              // cumulative partial information at gamma_hat
  std::vector<double> se;   // NaN entries when the information is singular
  bool se_valid = false;
  bool converged = false;
  int iterations = 0;
  std::size_t clamp_events = 0;
  std::size_t n = 0;
  double score_max_norm = std::numeric_limits<double>::infinity();
  double condition_number = 0.0;
  bool flat_likelihood = false;  // condition number above 1e8
  std::vector<std::string> warnings;
};

/// OLS initialization: regress g(y_t) on an intercept, x_t and the lagged
/// g(y_{t-i}), i=1..p, over t=p+1..n. theta starts at zero, lambda at 10.
inline ParamVector init_params(const ModelSpec& spec, const SeriesData& data,
                               std::vector<std::string>* warnings = nullptr) {
  spec.validate();
  data.validate();
  const std::size_t n = data.n();
  const std::size_t p = static_cast<std::size_t>(spec.p);
  const std::size_t r = static_cast<std::size_t>(spec.r);
  const std::size_t ncoef = 1 + r + p;
  if (n <= p + r + 1) {
    throw std::invalid_argument("init_params: series too short for the requested orders");
  }

  std::vector<double> gy(n);
  for (std::size_t t = 0; t < n; ++t) gy[t] = link_eval(spec.link, data.y[t]);

  Matrix xtx(ncoef, ncoef);
  std::vector<double> xty(ncoef, 0.0);
  std::vector<double> row(ncoef);
  for (std::size_t t = p; t < n; ++t) {
    row[0] = 1.0;
    for (std::size_t l = 0; l < r; ++l) row[1 + l] = data.X(t, l);
    for (std::size_t i = 0; i < p; ++i) row[1 + r + i] = gy[t - 1 - i];
    for (std::size_t a = 0; a < ncoef; ++a) {
      xty[a] += row[a] * gy[t];
      for (std::size_t b = a; b < ncoef; ++b) xtx(a, b) += row[a] * row[b];
    }
  }
  for (std::size_t a = 0; a < ncoef; ++a)
    for (std::size_t b = 0; b < a; ++b) xtx(a, b) = xtx(b, a);

  std::vector<double> coef;
  Matrix chol = xtx;
  if (cholesky_factor(chol)) {
    coef = cholesky_solve(chol, xty);
  } else {
    auto inv = sym_inverse(xtx);
    coef = matvec(inv.inverse, xty);
    if (warnings) {
      warnings->push_back("init_params: rank-deficient OLS design, used pseudo-inverse");
    }
  }

  ParamVector g;
  g.alpha = coef[0];
  g.beta.assign(coef.begin() + 1, coef.begin() + 1 + r);
  g.phi.assign(coef.begin() + 1 + r, coef.begin() + 1 + r + p);
  g.theta.assign(spec.q, 0.0);
  g.lambda = 10.0;
  return g;
}

namespace detail {

/// Working coordinates for the optimizer: (nu, log lambda), which keeps
/// lambda positive without constraints. Reported results are in the natural
/// parameterization.
inline std::vector<double> to_working(const ParamVector& g) {
  std::vector<double> w = g.to_flat();
  w.back() = std::log(g.lambda);
  return w;
}

inline ParamVector from_working(const ModelSpec& spec, std::vector<double> w) {
  w.back() = std::exp(w.back());
  return ParamVector::from_flat(spec, w);
}

}  // namespace detail

/// Partial maximum likelihood: quasi-Newton on (nu, log lambda) driven by the
/// analytic score, with a derivative-free simplex restart if the line search
/// stalls. Deterministic for fixed inputs and options.
inline FitResult fit_pmle(const ModelSpec& spec, const SeriesData& data,
                          const FitOptions& options = {}) {
  spec.validate();
  data.validate();

  FitResult result;
  result.spec = spec;
  result.n = data.n();
  if (static_cast<int>(data.n()) < 10 * spec.n_params()) {
    result.warnings.push_back("sample size below 10x parameter dimension; estimates may be "
                              "unstable");
  }

  const std::size_t m = static_cast<std::size_t>(spec.n_linear());
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t last_bad_t = 0;

  // Trial points the model cannot even evaluate (lambda underflow, linear
  // predictor overflow, ...) are rejected with +inf so the line search backs
  // off instead of aborting the fit.
  auto value = [&](const std::vector<double>& w) {
    const double lambda = std::exp(w.back());
    if (!(lambda > 0.0) || !std::isfinite(lambda)) return inf;
    try {
      ParamVector g = detail::from_working(spec, w);
      LoglikValue ll = partial_loglik_detail(spec, g, data);
      if (ll.bad_t != 0) last_bad_t = ll.bad_t;
      return std::isfinite(ll.value) ? -ll.value : inf;
    } catch (const std::exception&) {
      return inf;
    }
  };
  auto value_grad = [&](const std::vector<double>& w, std::vector<double>& grad) {
    grad.assign(m + 1, 0.0);
    const double lambda = std::exp(w.back());
    if (!(lambda > 0.0) || !std::isfinite(lambda)) return inf;
    try {
      ParamVector g = detail::from_working(spec, w);
      ScoreOutput sc = score(spec, g, data);
      if (sc.bad_t != 0) {
        last_bad_t = sc.bad_t;
        return inf;
      }
      for (std::size_t j = 0; j < m; ++j) grad[j] = -sc.grad[j];
      grad[m] = -sc.grad[m] * g.lambda;  // chain rule through lambda = exp(xi)
      return -sc.loglik;
    } catch (const std::exception&) {
      return inf;
    }
  };

  OptimOptions oopts;
  oopts.max_iter = options.max_iter;
  oopts.grad_tol = options.grad_tol;
  oopts.f_rel_tol = options.loglik_rel_tol;
  // convergence is judged on the score in the natural parameterization
  oopts.grad_norm = [&](const std::vector<double>& w, const std::vector<double>& grad) {
    double nm = 0.0;
    for (std::size_t j = 0; j < m; ++j) nm = std::max(nm, std::abs(grad[j]));
    nm = std::max(nm, std::abs(grad[m]) / std::exp(w[m]));
    return nm;
  };

  // Fisher-scoring refinement: Newton-type steps using the expected
  // information as the Hessian. Near the optimum the per-step likelihood
  // gain sits below summation rounding noise, so steps are accepted on
  // score-norm contraction, with a noise-tolerant likelihood guard keeping
  // the overall ascent intact.
  auto natural_score_norm = [&](const ScoreOutput& sc) {
    double nm = 0.0;
    for (double v : sc.grad) nm = std::max(nm, std::abs(v));
    return nm;
  };
  auto scoring_polish = [&](std::vector<double> w_in, double f_in, int* steps_used) {
    struct Point {
      std::vector<double> w;
      double f;
      double norm;
    };
    const double f_noise = 1e-9 * std::max(1.0, std::abs(f_in));
    ParamVector g0 = detail::from_working(spec, w_in);
    ScoreOutput sc0 = score(spec, g0, data);
    if (sc0.bad_t != 0) return std::pair<std::vector<double>, double>{w_in, f_in};
    Point cur{std::move(w_in), f_in, natural_score_norm(sc0)};
    Point best = cur;

    ScoreOutput sc = sc0;
    for (int it = 0; it < 40 && cur.norm >= options.grad_tol * 1e-3; ++it) {
      if (steps_used) ++*steps_used;
      ParamVector g = detail::from_working(spec, cur.w);
      Matrix K = info_matrix(spec, g, data).K;
      std::vector<double> delta;
      Matrix chol = K;
      if (cholesky_factor(chol)) {
        delta = cholesky_solve(chol, sc.grad);
      } else {
        delta = matvec(sym_inverse(K).inverse, sc.grad);
      }

      const std::vector<double> flat = g.to_flat();
      bool accepted = false;
      for (double t = 1.0; t >= 1e-4; t *= 0.5) {
        std::vector<double> trial = flat;
        for (std::size_t j = 0; j < trial.size(); ++j) trial[j] += t * delta[j];
        if (!(trial.back() > 0.0)) continue;
        std::vector<double> w_trial = trial;
        w_trial.back() = std::log(trial.back());
        ParamVector g_trial = detail::from_working(spec, w_trial);
        ScoreOutput sc_trial = score(spec, g_trial, data);
        if (sc_trial.bad_t != 0 || !std::isfinite(sc_trial.loglik)) continue;
        const double f_trial = -sc_trial.loglik;
        const double norm_trial = natural_score_norm(sc_trial);
        if (norm_trial < 0.9 * cur.norm && f_trial <= cur.f + f_noise) {
          cur = {std::move(w_trial), f_trial, norm_trial};
          sc = std::move(sc_trial);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      // prefer the smallest score norm whose likelihood is within noise of
      // the best seen
      if (cur.norm < best.norm && cur.f <= f_in + f_noise) best = cur;
    }
    return std::pair<std::vector<double>, double>{best.w, best.f};
  };

  ParamVector init = init_params(spec, data, &result.warnings);
  std::vector<double> w = detail::to_working(init);

  OptimResult opt = bfgs_minimize(value, value_grad, w, oopts);
  int total_iters = opt.iterations;
  bool f_converged = opt.converged_f;
  auto polished = scoring_polish(opt.x.empty() ? w : opt.x, opt.f, &total_iters);

  auto score_norm_at = [&](const std::vector<double>& wv) {
    std::vector<double> gr;
    double f = value_grad(wv, gr);
    if (!std::isfinite(f)) return std::numeric_limits<double>::infinity();
    return oopts.grad_norm(wv, gr);
  };

  for (int round = 0; round < 2 && score_norm_at(polished.first) >= options.grad_tol &&
                      !f_converged;
       ++round) {
    // simplex restart from the best point found so far
    OptimResult nm = nelder_mead_minimize(value, polished.first);
    total_iters += nm.iterations;
    if (!std::isfinite(nm.f)) break;
    opt = bfgs_minimize(value, value_grad, nm.x, oopts);
    total_iters += opt.iterations;
    f_converged = f_converged || opt.converged_f;
    auto p2 = scoring_polish(opt.x.empty() ? nm.x : opt.x, std::min(nm.f, opt.f), &total_iters);
    if (p2.second <= polished.second) polished = p2;
  }

  if (polished.first.empty() || !std::isfinite(polished.second)) {
    throw std::runtime_error(
        "fit_pmle: partial log-likelihood is non-finite at the initial parameters"
        + (last_bad_t ? " (first offending observation t=" + std::to_string(last_bad_t) + ")"
                      : std::string()));
  }

  result.gamma_hat = detail::from_working(spec, polished.first);
  result.loglik = -polished.second;
  result.iterations = total_iters;

  ScoreOutput final_score = score(spec, result.gamma_hat, data);
  double nm2 = 0.0;
  for (std::size_t j = 0; j <= m; ++j) nm2 = std::max(nm2, std::abs(final_score.grad[j]));
  result.score_max_norm = nm2;
  result.converged = nm2 < options.grad_tol || f_converged;
  if (!result.converged) {
    result.warnings.push_back("optimizer did not converge; reporting the best point found");
  }
  if (options.verbosity > 0) {
    std::cerr << "fit_pmle: n=" << result.n << " dim=" << m + 1 << " iterations="
              << result.iterations << " loglik=" << result.loglik << " score_max_norm="
              << result.score_max_norm << (result.converged ? "" : " (not converged)")
              << "\n";
  }

  result.clamp_events = filter_series(spec, result.gamma_hat, data).clamp_events;
  result.info = info_matrix(spec, result.gamma_hat, data).K;

  auto inv = sym_inverse(result.info);
  result.condition_number = inv.condition_number;
  result.flat_likelihood = inv.condition_number > 1e8;
  if (result.flat_likelihood) {
    result.warnings.push_back("information matrix condition number above 1e8; the likelihood "
                              "surface is nearly flat in some direction");
  }
  result.se.assign(m + 1, std::numeric_limits<double>::quiet_NaN());
  if (inv.positive_definite) {
    result.se_valid = true;
    for (std::size_t j = 0; j <= m; ++j) {
      double v = inv.inverse(j, j);
      result.se[j] = v > 0.0 ? std::sqrt(v) : std::numeric_limits<double>::quiet_NaN();
      if (!(v > 0.0)) result.se_valid = false;
    }
  } else {
    result.warnings.push_back("information matrix is not positive definite; standard errors "
                              "are reported as NaN");
  }

  for (auto& wmsg : arma_polynomial_warnings(result.gamma_hat)) {
    result.warnings.push_back(wmsg);
  }
  return result;
}

struct CiEntry {
  double se;
  double lo;
  double hi;
};

/// gamma_hat_j +/- z_{1-delta/2} * se_j for each parameter.
inline std::vector<CiEntry> standard_errors_ci(const FitResult& fit, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("standard_errors_ci: level must lie in (0,1)");
  }
  const double z = normal_quantile(0.5 + level / 2.0);
  std::vector<double> est = fit.gamma_hat.to_flat();
  std::vector<CiEntry> out(est.size());
  for (std::size_t j = 0; j < est.size(); ++j) {
    out[j] = {fit.se[j], est[j] - z * fit.se[j], est[j] + z * fit.se[j]};
  }
  return out;
}

struct WaldTest {
  double z;
  double p_value;
};

/// Wald z statistic for H0: gamma_j = null_value, with a two-sided normal p.
inline WaldTest wald_z(const FitResult& fit, std::size_t j, double null_value) {
  std::vector<double> est = fit.gamma_hat.to_flat();
  if (j >= est.size()) throw std::invalid_argument("wald_z: parameter index out of range");
  double z = (est[j] - null_value) / fit.se[j];
  double p = std::erfc(std::abs(z) / std::sqrt(2.0));
  return {z, p};
}

struct CriteriaValues {
  double aic;
  double bic;
  double hqc;
};

inline CriteriaValues info_criteria_values(double loglik, double k, double n) {
  return {-2.0 * loglik + 2.0 * k,
          -2.0 * loglik + k * std::log(n),
          -2.0 * loglik + 2.0 * k * std::log(std::log(n))};
}

inline CriteriaValues info_criteria(const FitResult& fit) {
  return info_criteria_values(fit.loglik, static_cast<double>(fit.gamma_hat.dim()),
                              static_cast<double>(fit.n));
}

struct Removal {
  int step;
  std::size_t original_index;  // column position in the input X
  std::string name;
  double p_value;
};

struct EliminationResult {
  FitResult fit;
  SeriesData data;                      // with only the surviving covariates
  std::vector<std::string> kept_names;
  std::vector<std::size_t> kept_original;
  std::vector<Removal> trace;
};

/// Backward elimination over the covariates only (alpha, phi, theta and
/// lambda are never candidates): repeatedly drop the covariate with the
/// largest Wald p-value above the threshold and refit, until all survivors
/// are significant. A NaN p-value (singular information) is treated as 1.
inline EliminationResult backward_eliminate(const ModelSpec& spec, const SeriesData& data,
                                            const std::vector<std::string>& covariate_names,
                                            double p_threshold = 0.05,
                                            const FitOptions& options = {}) {
  if (covariate_names.size() != static_cast<std::size_t>(spec.r)) {
    throw std::invalid_argument("backward_eliminate: covariate name count mismatch");
  }

  EliminationResult out;
  out.data = data;
  out.kept_names = covariate_names;
  out.kept_original.resize(covariate_names.size());
  for (std::size_t i = 0; i < out.kept_original.size(); ++i) out.kept_original[i] = i;

  ModelSpec cur = spec;
  for (int step = 1;; ++step) {
    out.fit = fit_pmle(cur, out.data, options);

    std::size_t worst = 0;
    double worst_p = -1.0;
    for (std::size_t l = 0; l < static_cast<std::size_t>(cur.r); ++l) {
      double p = wald_z(out.fit, 1 + l, 0.0).p_value;
      if (std::isnan(p)) p = 1.0;
      if (p > worst_p) {
        worst_p = p;
        worst = l;
      }
    }
    if (cur.r == 0 || worst_p <= p_threshold) break;

    out.trace.push_back({step, out.kept_original[worst], out.kept_names[worst], worst_p});
    // drop column `worst`
    Matrix xnew(out.data.n(), cur.r - 1);
    for (std::size_t t = 0; t < out.data.n(); ++t) {
      std::size_t c = 0;
      for (std::size_t l = 0; l < static_cast<std::size_t>(cur.r); ++l) {
        if (l == worst) continue;
        xnew(t, c++) = out.data.X(t, l);
      }
    }
    out.data.X = std::move(xnew);
    out.kept_names.erase(out.kept_names.begin() + worst);
    out.kept_original.erase(out.kept_original.begin() + worst);
    cur.r -= 1;
  }
  return out;
}

}  // namespace uwarma
