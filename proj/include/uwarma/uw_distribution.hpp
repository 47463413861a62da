#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uwarma/constants.hpp"
#include "uwarma/rng.hpp"

namespace uwarma {

/// Unit-Weibull law on (0,1) parameterized by its rho-th quantile mu and a
/// shape lambda. rho is fixed a priori; mu is the point with cdf(mu) = rho.
struct UWParams {
  double mu;
  double lambda;
  double rho;

  UWParams(double mu_, double lambda_, double rho_) : mu(mu_), lambda(lambda_), rho(rho_) {
    if (!(mu > 0.0 && mu < 1.0)) {
      throw std::domain_error("UWParams: mu must lie in (0,1)");
    }
    if (!(lambda > 0.0)) {
      throw std::domain_error("UWParams: lambda must be positive");
    }
    if (!(rho > 0.0 && rho < 1.0)) {
      throw std::domain_error("UWParams: rho must lie in (0,1)");
    }
  }
};

namespace detail {

/// ratio = log(y)/log(mu), positive on (0,1)^2; floored away from zero so
/// its log stays finite when y -> 1.
inline double log_ratio(double y, double mu) {
  double a = std::log(y) / std::log(mu);
  return std::max(a, kRatioFloor);
}

/// a^lambda evaluated as exp(lambda*log(a)); exponent capped so a huge ratio
/// degrades to a large-but-finite value instead of inf*0 artifacts.
inline double pow_lambda(double log_a, double lambda) {
  double e = lambda * log_a;
  return std::exp(std::min(e, 700.0));
}

}  // namespace detail

inline double log_pdf(double y, const UWParams& p) {
  if (!(y > 0.0 && y < 1.0)) {
    throw std::domain_error("log_pdf: y must lie strictly in (0,1)");
  }
  const double log_mu = std::log(p.mu);
  const double log_rho = std::log(p.rho);
  const double a = detail::log_ratio(y, p.mu);
  const double log_a = std::log(a);
  return std::log(p.lambda) - std::log(y) + std::log(log_rho / log_mu) +
         (p.lambda - 1.0) * log_a + log_rho * detail::pow_lambda(log_a, p.lambda);
}

inline double pdf(double y, const UWParams& p) { return std::exp(log_pdf(y, p)); }

inline double cdf(double y, const UWParams& p) {
  if (!(y > 0.0 && y < 1.0)) {
    throw std::domain_error("cdf: y must lie strictly in (0,1)");
  }
  if (y == p.mu) return p.rho;  // the defining identity of the parameterization
  const double a = detail::log_ratio(y, p.mu);
  double e = p.lambda * std::log(a);
  if (e > 700.0) return 0.0;  // ratio^lambda overflows, rho^inf -> 0
  return std::exp(std::exp(e) * std::log(p.rho));
}

/// Inverse cdf: y = exp(log(mu) * (log(u)/log(rho))^(1/lambda)).
/// Output is strictly inside (0,1) and quantile(rho) == mu exactly.
inline double quantile(double u, const UWParams& p) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("quantile: u must lie strictly in (0,1)");
  }
  if (u == p.rho) return p.mu;  // exact by the quantile parameterization
  double t = std::pow(std::log(u) / std::log(p.rho), 1.0 / p.lambda);
  double y = std::exp(std::log(p.mu) * t);
  // exp can land on 1.0 when the exponent underflows; keep strictly interior.
  if (y >= 1.0) y = 1.0 - kMuEps;
  if (y <= 0.0) y = kMuEps;
  return y;
}

inline double draw(const UWParams& p, Rng& rng) { return quantile(rng.uniform01(), p); }

/// Inverse-transform sampler; deterministic given the seed.
inline std::vector<double> sample(const UWParams& p, std::size_t count, std::uint64_t seed) {
  if (count == 0) {
    throw std::invalid_argument("sample: count must be at least 1");
  }
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = draw(p, rng);
  return out;
}

/// Closed-form expectations of A = log(Y)/log(mu) under UW(mu,lambda;rho).
/// These feed the expected-information blocks; they do not depend on mu.
///
/// All four follow from the change of variables U = A^lambda, which is
/// Exponential with rate s = -log(rho): E[U] = 1/s, E[log U] = -(kappa+log s),
/// E[U log U] = (1-kappa-log s)/s and E[U (log U)^2] =
/// ((1-kappa-log s)^2 + pi^2/6 - 1)/s via derivatives of the gamma function.
/// The log-ratio and squared-log moments are validated against quadrature and
/// Monte Carlo in the test suite; note in particular that the squared-log
/// moment is an expectation of a nonnegative quantity and must be positive.
enum class LogRatioMoment {
  pow_lambda,         // E[A^lambda]
  log_ratio,          // E[log A]
  pow_lambda_log,     // E[A^lambda log A]
  pow_lambda_log_sq,  // E[A^lambda (log A)^2]
};

inline double log_ratio_expectation(LogRatioMoment which, const UWParams& p) {
  const double log_rho = std::log(p.rho);
  const double L = std::log(-log_rho);  // log of the exponential rate
  const double k = kEulerGamma;
  switch (which) {
    case LogRatioMoment::pow_lambda:
      return -1.0 / log_rho;
    case LogRatioMoment::log_ratio:
      return -(k + L) / p.lambda;
    case LogRatioMoment::pow_lambda_log:
      return (k + L - 1.0) / (p.lambda * log_rho);
    case LogRatioMoment::pow_lambda_log_sq: {
      const double c = 1.0 - k - L;
      return -(c * c + kPi * kPi / 6.0 - 1.0) / (p.lambda * p.lambda * log_rho);
    }
  }
  return 0.0;
}

}  // namespace uwarma
