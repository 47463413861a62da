#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwarma/garma.hpp"
#include "uwarma/model.hpp"

namespace uwarma {

struct ForecastResult {
  std::size_t horizon = 0;
  std::vector<double> yhat;         // h-step-ahead point forecasts, in (0,1)
  std::vector<double> mu_insample;  // fitted conditional quantiles for t=1..n
};

/// Recursive h-step-ahead forecasts: in-sample terms use observed y and the
/// reconstructed residuals, out-of-sample terms substitute earlier forecasts
/// for unobserved y and set residuals to zero (they only exist up to t=n).
inline ForecastResult forecast_ahead(const ModelSpec& spec, const ParamVector& gamma,
                                     const SeriesData& data, std::size_t h,
                                     const Matrix& x_future = {}) {
  if (h == 0) throw std::invalid_argument("forecast_ahead: horizon must be positive");
  if (spec.r > 0 && (x_future.rows < h || static_cast<int>(x_future.cols) != spec.r)) {
    throw std::invalid_argument(
        "forecast_ahead: the model has covariates, so h future covariate rows are required "
        "(model their future values first if they are not deterministic)");
  }

  const FilterOutput f = filter_series(spec, gamma, data);
  const std::size_t n = data.n();

  std::vector<double> g_star(n + h);  // g([y_t]*) for t = 1..n+h
  for (std::size_t t = 0; t < n; ++t) g_star[t] = link_eval(spec.link, data.y[t]);

  auto xdot = [&](std::size_t t) {  // 0-based t over the extended timeline
    if (spec.r == 0) return 0.0;
    double s = 0.0;
    if (t < n) {
      for (int j = 0; j < spec.r; ++j) s += data.X(t, j) * gamma.beta[j];
    } else {
      for (int j = 0; j < spec.r; ++j) s += x_future(t - n, j) * gamma.beta[j];
    }
    return s;
  };

  ForecastResult out;
  out.horizon = h;
  out.mu_insample = f.mu;
  out.yhat.resize(h);
  for (std::size_t k = 0; k < h; ++k) {
    const std::size_t t = n + k;
    double eta = gamma.alpha + xdot(t);
    for (std::size_t i = 1; i <= gamma.phi.size(); ++i) {
      if (t >= i) eta += gamma.phi[i - 1] * (g_star[t - i] - xdot(t - i));
    }
    for (std::size_t j = 1; j <= gamma.theta.size(); ++j) {
      if (t >= j && t - j < n) eta += gamma.theta[j - 1] * f.resid[t - j];
    }
    double y = link_inv(spec.link, eta);
    out.yhat[k] = y;
    g_star[t] = link_eval(spec.link, y);
  }
  return out;
}

/// Mean absolute percentage error, in unitary value (0.05 means 5%).
inline double mape(const std::vector<double>& actual, const std::vector<double>& predicted) {
  if (actual.size() != predicted.size()) {
    throw std::invalid_argument("mape: series lengths differ");
  }
  if (actual.empty()) throw std::invalid_argument("mape: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) throw std::domain_error("mape: actual value is zero");
    s += std::abs(actual[i] - predicted[i]) / std::abs(actual[i]);
  }
  return s / static_cast<double>(actual.size());
}

}  // namespace uwarma
