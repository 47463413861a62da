#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "uwarma/constants.hpp"
#include "uwarma/garma.hpp"
#include "uwarma/linalg.hpp"
#include "uwarma/model.hpp"

namespace uwarma {

namespace detail {

/// Pointwise pieces of the log-likelihood and its mu/lambda derivatives,
/// all in terms of a = log(y)/log(mu).
struct PointTerms {
  double log_a;    // log of the (floored) ratio
  double a_pow;    // a^lambda
  double loglik;   // log f(y | mu)
  double dl_dmu;   // d loglik / d mu
  double dl_dlam;  // d loglik / d lambda
};

inline PointTerms point_terms(double y, double mu, double lambda, double log_rho) {
  PointTerms p;
  const double log_mu = std::log(mu);
  const double a = std::max(std::log(y) / log_mu, kRatioFloor);
  p.log_a = std::log(a);
  p.a_pow = std::exp(std::min(lambda * p.log_a, 700.0));
  const double rho_apow = log_rho * p.a_pow;
  p.loglik = std::log(lambda) - std::log(y) + std::log(log_rho / log_mu) +
             (lambda - 1.0) * p.log_a + rho_apow;
  p.dl_dmu = -lambda * (1.0 + rho_apow) / (mu * log_mu);
  p.dl_dlam = 1.0 / lambda + (1.0 + rho_apow) * p.log_a;
  return p;
}

}  // namespace detail

struct LoglikValue {
  double value = -std::numeric_limits<double>::infinity();
  /// 1-based index of the first observation whose contribution went
  /// non-finite (boundary collapse); 0 when everything was fine.
  std::size_t bad_t = 0;
};

/// Sum of conditional log-densities log f(y_t | F_{t-1}) with mu_t produced
/// by the recursion. A non-finite value is reported, not thrown, so that
/// optimizers can treat it as a rejected trial point.
inline LoglikValue partial_loglik_detail(const ModelSpec& spec, const ParamVector& gamma,
                                         const SeriesData& data) {
  const FilterOutput f = filter_series(spec, gamma, data);
  const double log_rho = std::log(spec.rho);
  LoglikValue out;
  double sum = 0.0;
  for (std::size_t t = 0; t < data.n(); ++t) {
    double lt = detail::point_terms(data.y[t], f.mu[t], gamma.lambda, log_rho).loglik;
    sum += lt;
    if (!std::isfinite(sum)) {
      out.bad_t = t + 1;
      return out;
    }
  }
  out.value = sum;
  return out;
}

inline double partial_loglik(const ModelSpec& spec, const ParamVector& gamma,
                             const SeriesData& data) {
  return partial_loglik_detail(spec, gamma, data).value;
}

/// d eta_t / d nu_j for nu = (alpha, beta', phi', theta')', one row per
/// observation. The recursions mirror the filter: an AR regressor is the
/// lagged link-scale observation net of its covariate term, an MA regressor
/// is the lagged residual, and every column feeds back through -theta_j
/// times its own lagged values. Pre-sample derivatives are zero.
inline Matrix eta_gradients_from_filter(const ModelSpec& spec, const ParamVector& gamma,
                                        const SeriesData& data, const FilterOutput& filter) {
  const std::size_t n = data.n();
  const std::size_t m = static_cast<std::size_t>(spec.n_linear());
  const std::size_t p = gamma.phi.size(), q = gamma.theta.size(), r = gamma.beta.size();

  std::vector<double> gy;
  if (p > 0) {
    gy.resize(n);
    for (std::size_t t = 0; t < n; ++t) gy[t] = link_eval(spec.link, data.y[t]);
  }

  Matrix D(n, m);
  for (std::size_t t = 0; t < n; ++t) {
    // alpha
    {
      double d = 1.0;
      for (std::size_t j = 1; j <= q && t >= j; ++j)
        d -= gamma.theta[j - 1] * D(t - j, 0);
      D(t, 0) = d;
    }
    // beta_l
    for (std::size_t l = 0; l < r; ++l) {
      double d = data.X(t, l);
      for (std::size_t i = 1; i <= p && t >= i; ++i)
        d -= gamma.phi[i - 1] * data.X(t - i, l);
      for (std::size_t j = 1; j <= q && t >= j; ++j)
        d -= gamma.theta[j - 1] * D(t - j, 1 + l);
      D(t, 1 + l) = d;
    }
    // phi_k: regressor g(y_{t-k}) - x_{t-k}'beta
    for (std::size_t k = 1; k <= p; ++k) {
      double d = 0.0;
      if (t >= k) d = gy[t - k] - data.xrow_dot(t - k, gamma.beta);
      for (std::size_t j = 1; j <= q && t >= j; ++j)
        d -= gamma.theta[j - 1] * D(t - j, 1 + r + (k - 1));
      D(t, 1 + r + (k - 1)) = d;
    }
    // theta_s: regressor r_{t-s}
    for (std::size_t s = 1; s <= q; ++s) {
      double d = 0.0;
      if (t >= s) d = filter.resid[t - s];
      for (std::size_t j = 1; j <= q && t >= j; ++j)
        d -= gamma.theta[j - 1] * D(t - j, 1 + r + p + (s - 1));
      D(t, 1 + r + p + (s - 1)) = d;
    }
  }
  return D;
}

inline Matrix eta_gradients(const ModelSpec& spec, const ParamVector& gamma,
                            const SeriesData& data) {
  return eta_gradients_from_filter(spec, gamma, data, filter_series(spec, gamma, data));
}

struct ScoreOutput {
  double loglik = -std::numeric_limits<double>::infinity();
  std::size_t bad_t = 0;
  /// gradient of the partial log-likelihood in the order
  /// (alpha, beta', phi', theta', lambda)
  std::vector<double> grad;
  /// n x (r+p+q+1) matrix of d eta_t / d nu_j, cached for reuse
  Matrix eta_jacobian;
};

/// Analytic partial score: U_nu,j = sum_t dl_t/dmu_t * (1/g'(mu_t)) * deta_t/dnu_j
/// and U_lambda = sum_t dl_t/dlambda.
inline ScoreOutput score(const ModelSpec& spec, const ParamVector& gamma,
                         const SeriesData& data) {
  const FilterOutput f = filter_series(spec, gamma, data);
  const std::size_t n = data.n();
  const std::size_t m = static_cast<std::size_t>(spec.n_linear());
  const double log_rho = std::log(spec.rho);

  ScoreOutput out;
  out.eta_jacobian = eta_gradients_from_filter(spec, gamma, data, f);
  out.grad.assign(m + 1, 0.0);

  double loglik = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const auto pt = detail::point_terms(data.y[t], f.mu[t], gamma.lambda, log_rho);
    loglik += pt.loglik;
    if (!std::isfinite(loglik)) {
      out.bad_t = t + 1;
      out.grad.assign(m + 1, 0.0);
      out.loglik = -std::numeric_limits<double>::infinity();
      return out;
    }
    const double w = pt.dl_dmu / link_deriv(spec.link, f.mu[t]);
    for (std::size_t j = 0; j < m; ++j) out.grad[j] += w * out.eta_jacobian(t, j);
    out.grad[m] += pt.dl_dlam;
  }
  out.loglik = loglik;
  return out;
}

struct InfoMatrix {
  /// Cumulative partial information, symmetric (r+p+q+2) square, ordered as
  /// the flat parameter vector.
  Matrix K;
};

/// Expected-curvature blocks. Per observation:
///   -E[d2l/dmu2    | F] = lambda^2 / (mu log(mu))^2
///   -E[d2l/dmu dlam| F] = (kappa + log(-log rho) - 1) / (mu log mu)
///   -E[d2l/dlam2   | F] = ((1 - kappa - L)^2 + pi^2/6) / lambda^2
/// with L = log(-log rho). The lambda block combines 1/lambda^2 with
/// -log(rho) * E[A^lambda (log A)^2] (see log_ratio_expectation); it is
/// positive for every rho, as an information term must be, and is certified
/// against Monte Carlo averages of exact second derivatives in the
/// acceptance suite.
inline InfoMatrix info_matrix(const ModelSpec& spec, const ParamVector& gamma,
                              const SeriesData& data) {
  const FilterOutput f = filter_series(spec, gamma, data);
  const Matrix D = eta_gradients_from_filter(spec, gamma, data, f);
  const std::size_t n = data.n();
  const std::size_t m = static_cast<std::size_t>(spec.n_linear());

  const double L = std::log(-std::log(spec.rho));
  const double k = kEulerGamma;
  const double lambda = gamma.lambda;

  InfoMatrix out;
  out.K = Matrix(m + 1, m + 1);
  for (std::size_t t = 0; t < n; ++t) {
    const double mu = f.mu[t];
    const double log_mu = std::log(mu);
    const double gp = link_deriv(spec.link, mu);
    const double T = 1.0 / gp;
    const double e_mu = lambda * lambda / (mu * mu * log_mu * log_mu);
    const double e_cross = (k + L - 1.0) / (mu * log_mu);
    const double w = T * e_mu * T;
    for (std::size_t i = 0; i < m; ++i) {
      const double di = D(t, i);
      for (std::size_t j = i; j < m; ++j) out.K(i, j) += w * di * D(t, j);
      out.K(i, m) += T * e_cross * di;
    }
  }
  const double c = 1.0 - k - L;
  const double kll_per_obs = (c * c + kPi * kPi / 6.0) / (lambda * lambda);
  out.K(m, m) = static_cast<double>(n) * kll_per_obs;
  for (std::size_t i = 0; i < m + 1; ++i)
    for (std::size_t j = 0; j < i; ++j) out.K(i, j) = out.K(j, i);
  return out;
}

}  // namespace uwarma
