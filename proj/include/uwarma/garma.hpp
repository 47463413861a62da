#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwarma/constants.hpp"
#include "uwarma/linalg.hpp"
#include "uwarma/model.hpp"
#include "uwarma/uw_distribution.hpp"

namespace uwarma {

namespace detail {

/// Linear predictor at 0-based time t given the histories gy (link-scale
/// observations), xb (covariate inner products) and resid. Terms whose index
/// would fall before the first observation contribute zero. Both the filter
/// and the simulator go through this one function, so replaying a simulated
/// path reproduces the generator's mu sequence bit for bit.
inline double eta_at(std::size_t t, double alpha, const std::vector<double>& phi,
                     const std::vector<double>& theta, const std::vector<double>& gy,
                     const std::vector<double>& xb, const std::vector<double>& resid) {
  double eta = alpha + (xb.empty() ? 0.0 : xb[t]);
  for (std::size_t i = 1; i <= phi.size(); ++i) {
    if (t >= i) eta += phi[i - 1] * (gy[t - i] - (xb.empty() ? 0.0 : xb[t - i]));
  }
  for (std::size_t j = 1; j <= theta.size(); ++j) {
    if (t >= j) eta += theta[j - 1] * resid[t - j];
  }
  return eta;
}

inline void require_conformable(const ModelSpec& spec, const ParamVector& gamma,
                                const SeriesData& data) {
  spec.validate();
  if (!gamma.conforms(spec)) {
    throw std::invalid_argument("parameter vector does not conform to the model orders");
  }
  if (spec.r > 0 && static_cast<int>(data.X.cols) != spec.r) {
    throw std::invalid_argument("covariate matrix has " + std::to_string(data.X.cols) +
                                " columns, model expects " + std::to_string(spec.r));
  }
}

}  // namespace detail

/// One deterministic pass of the recursion over observed data: eta_t, mu_t
/// and the link-scale residual r_t = g(y_t) - g(mu_t). mu is clamped into
/// [kMuEps, 1-kMuEps]; each clamp is counted for instability diagnostics.
inline FilterOutput filter_series(const ModelSpec& spec, const ParamVector& gamma,
                                  const SeriesData& data) {
  detail::require_conformable(spec, gamma, data);
  const std::size_t n = data.n();

  std::vector<double> gy(n), xb;
  for (std::size_t t = 0; t < n; ++t) gy[t] = link_eval(spec.link, data.y[t]);
  if (spec.r > 0) {
    xb.resize(n);
    for (std::size_t t = 0; t < n; ++t) xb[t] = data.xrow_dot(t, gamma.beta);
  }

  FilterOutput out;
  out.eta.resize(n);
  out.mu.resize(n);
  out.resid.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    double eta = detail::eta_at(t, gamma.alpha, gamma.phi, gamma.theta, gy, xb, out.resid);
    double mu = link_inv(spec.link, eta);
    if (mu <= kMuEps || mu >= 1.0 - kMuEps) ++out.clamp_events;
    if (!std::isfinite(eta)) {
      throw std::runtime_error("filter_series: non-finite linear predictor at t=" +
                               std::to_string(t + 1) + " (data too close to the boundary?)");
    }
    out.eta[t] = eta;
    out.mu[t] = mu;
    out.resid[t] = gy[t] - link_eval(spec.link, mu);
  }
  return out;
}

struct SimulateOptions {
  std::size_t burnin = 1000;
  /// lambda < 1 makes the density blow up at both endpoints and paths tend
  /// to get numerically stuck there; rejected unless explicitly forced.
  bool force_small_lambda = false;
  /// When false, a conditional quantile saturating at the boundary aborts
  /// the simulation instead of silently producing a degenerate path.
  bool allow_boundary_clamp = false;
};

struct SimOutput {
  SeriesData data;         // post burn-in: y plus the matching covariate rows
  std::vector<double> mu;  // generator's conditional quantiles for the kept points
  std::size_t clamp_events = 0;
};

/// Iteratively builds mu_t and draws y_t ~ UW(mu_t, lambda; rho), starting
/// from zero initialization, then discards the first `burnin` points.
/// X covers the whole internal timeline: burnin + n rows (or empty if r=0).
inline SimOutput simulate(const ModelSpec& spec, const ParamVector& gamma, const Matrix& X,
                          std::size_t n, std::uint64_t seed, const SimulateOptions& opts = {}) {
  spec.validate();
  if (!gamma.conforms(spec)) {
    throw std::invalid_argument("simulate: parameter vector does not conform to the model");
  }
  if (gamma.lambda < 1.0 && !opts.force_small_lambda) {
    throw std::invalid_argument(
        "simulate: lambda < 1 gives a bathtub-shaped conditional density whose paths tend to "
        "collapse numerically onto {0,1}; pass force_small_lambda to try anyway");
  }
  const std::size_t total = opts.burnin + n;
  if (spec.r > 0 && (X.rows != total || static_cast<int>(X.cols) != spec.r)) {
    throw std::invalid_argument("simulate: X must have burnin+n rows (burn-in covariate rows "
                                "are the caller's responsibility) and r columns");
  }

  Rng rng(seed);
  std::vector<double> ys(total), gy(total), resid(total), mu(total), xb;
  if (spec.r > 0) {
    xb.resize(total);
    for (std::size_t t = 0; t < total; ++t) {
      double s = 0.0;
      for (int j = 0; j < spec.r; ++j) s += X(t, j) * gamma.beta[j];
      xb[t] = s;
    }
  }

  SimOutput out;
  for (std::size_t t = 0; t < total; ++t) {
    double eta = detail::eta_at(t, gamma.alpha, gamma.phi, gamma.theta, gy, xb, resid);
    double m = link_inv(spec.link, eta);
    if (m <= kMuEps || m >= 1.0 - kMuEps) {
      ++out.clamp_events;
      if (!opts.allow_boundary_clamp) {
        throw std::runtime_error("simulate: conditional quantile numerically indistinguishable "
                                 "from the boundary at t=" + std::to_string(t + 1) +
                                 " (eta=" + std::to_string(eta) + ")");
      }
    }
    mu[t] = m;
    ys[t] = quantile(rng.uniform01(), UWParams(m, gamma.lambda, spec.rho));
    gy[t] = link_eval(spec.link, ys[t]);
    resid[t] = gy[t] - link_eval(spec.link, m);
  }

  out.data.y.assign(ys.begin() + opts.burnin, ys.end());
  out.mu.assign(mu.begin() + opts.burnin, mu.end());
  if (spec.r > 0) {
    out.data.X = Matrix(n, spec.r);
    for (std::size_t t = 0; t < n; ++t)
      for (int j = 0; j < spec.r; ++j) out.data.X(t, j) = X(opts.burnin + t, j);
  }
  return out;
}

/// ARMA-polynomial sanity checks: near-unit AR roots and near-common roots
/// of the AR and MA characteristic polynomials. Advisory only; the model is
/// still evaluated as specified.
inline std::vector<std::string> arma_polynomial_warnings(const ParamVector& gamma,
                                                         double tol = 1e-8) {
  std::vector<std::string> warnings;
  std::vector<double> ar{1.0};
  for (double v : gamma.phi) ar.push_back(-v);
  std::vector<double> ma{1.0};
  for (double v : gamma.theta) ma.push_back(v);

  auto ar_roots = poly_roots(ar);
  auto ma_roots = poly_roots(ma);
  for (const auto& z : ar_roots) {
    if (std::abs(std::abs(z) - 1.0) <= tol) {
      warnings.push_back("AR characteristic polynomial has a root of modulus 1 within " +
                         std::to_string(tol));
      break;
    }
  }
  for (const auto& za : ar_roots) {
    for (const auto& zm : ma_roots) {
      if (std::abs(za - zm) <= tol) {
        warnings.push_back("AR and MA characteristic polynomials share a common root");
        return warnings;
      }
    }
  }
  return warnings;
}

}  // namespace uwarma
