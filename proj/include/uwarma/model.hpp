#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwarma/linalg.hpp"
#include "uwarma/links.hpp"

namespace uwarma {

/// Model orders and the fixed quantile level. rho is chosen a priori and is
/// never estimated. An intercept is always present, so the model is
/// well-defined even with p = q = r = 0.
struct ModelSpec {
  int p = 0;
  int q = 0;
  double rho = 0.5;
  LinkKind link = LinkKind::logit;
  int r = 0;

  ModelSpec() = default;
  ModelSpec(int p_, int q_, double rho_, LinkKind link_, int r_ = 0)
      : p(p_), q(q_), rho(rho_), link(link_), r(r_) {
    validate();
  }

  void validate() const {
    if (p < 0 || q < 0 || r < 0) {
      throw std::invalid_argument("ModelSpec: orders must be nonnegative");
    }
    if (!(rho > 0.0 && rho < 1.0)) {
      throw std::invalid_argument("ModelSpec: rho must lie in (0,1)");
    }
  }

  /// alpha + beta + phi + theta + lambda
  int n_params() const { return r + p + q + 2; }
  /// everything except lambda
  int n_linear() const { return r + p + q + 1; }
};

/// Full parameter set gamma = (alpha, beta', phi', theta', lambda)'.
struct ParamVector {
  double alpha = 0.0;
  std::vector<double> beta;
  std::vector<double> phi;
  std::vector<double> theta;
  double lambda = 1.0;

  ParamVector() = default;
  ParamVector(double alpha_, std::vector<double> beta_, std::vector<double> phi_,
              std::vector<double> theta_, double lambda_)
      : alpha(alpha_), beta(std::move(beta_)), phi(std::move(phi_)),
        theta(std::move(theta_)), lambda(lambda_) {
    if (!(lambda > 0.0)) {
      throw std::invalid_argument("ParamVector: lambda must be positive");
    }
  }

  std::size_t dim() const { return beta.size() + phi.size() + theta.size() + 2; }

  bool conforms(const ModelSpec& spec) const {
    return static_cast<int>(beta.size()) == spec.r &&
           static_cast<int>(phi.size()) == spec.p &&
           static_cast<int>(theta.size()) == spec.q;
  }

  /// Flat layout [alpha, beta..., phi..., theta..., lambda].
  std::vector<double> to_flat() const {
    std::vector<double> v;
    v.reserve(dim());
    v.push_back(alpha);
    v.insert(v.end(), beta.begin(), beta.end());
    v.insert(v.end(), phi.begin(), phi.end());
    v.insert(v.end(), theta.begin(), theta.end());
    v.push_back(lambda);
    return v;
  }

  static ParamVector from_flat(const ModelSpec& spec, std::span<const double> v) {
    if (v.size() != static_cast<std::size_t>(spec.n_params())) {
      throw std::invalid_argument("ParamVector: flat vector has wrong length");
    }
    ParamVector g;
    std::size_t k = 0;
    g.alpha = v[k++];
    g.beta.assign(v.begin() + k, v.begin() + k + spec.r);
    k += spec.r;
    g.phi.assign(v.begin() + k, v.begin() + k + spec.p);
    k += spec.p;
    g.theta.assign(v.begin() + k, v.begin() + k + spec.q);
    k += spec.q;
    g.lambda = v[k];
    if (!(g.lambda > 0.0)) {
      throw std::invalid_argument("ParamVector: lambda must be positive");
    }
    return g;
  }
};

/// Human-readable name of flat-parameter j, used in reports and traces.
inline std::string param_name(const ModelSpec& spec, std::size_t j,
                              const std::vector<std::string>& covariate_names = {}) {
  if (j == 0) return "alpha";
  j -= 1;
  if (j < static_cast<std::size_t>(spec.r)) {
    if (j < covariate_names.size()) return covariate_names[j];
    return "beta" + std::to_string(j + 1);
  }
  j -= spec.r;
  if (j < static_cast<std::size_t>(spec.p)) return "phi" + std::to_string(j + 1);
  j -= spec.p;
  if (j < static_cast<std::size_t>(spec.q)) return "theta" + std::to_string(j + 1);
  return "lambda";
}

/// Observed response in (0,1) plus an n x r covariate matrix (r may be 0).
struct SeriesData {
  std::vector<double> y;
  Matrix X;  // X.rows == y.size() when X.cols > 0

  std::size_t n() const { return y.size(); }

  void validate() const {
    for (std::size_t t = 0; t < y.size(); ++t) {
      if (!(y[t] > 0.0 && y[t] < 1.0)) {
        throw std::invalid_argument("SeriesData: y[" + std::to_string(t + 1) +
                                    "] must lie strictly in (0,1)");
      }
    }
    if (X.cols > 0 && X.rows != y.size()) {
      throw std::invalid_argument("SeriesData: covariate rows do not match series length");
    }
    for (double v : X.data) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("SeriesData: covariates must be finite");
      }
    }
  }

  double xrow_dot(std::size_t t, const std::vector<double>& beta) const {
    if (beta.empty() || X.cols == 0) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < X.cols; ++j) s += X(t, j) * beta[j];
    return s;
  }
};

/// Output of one pass of the recursion over observed data.
struct FilterOutput {
  std::vector<double> eta;
  std::vector<double> mu;
  std::vector<double> resid;  // r_t = g(y_t) - g(mu_t)
  std::size_t clamp_events = 0;
};

}  // namespace uwarma
