#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uwarma/constants.hpp"
#include "uwarma/normal.hpp"

namespace uwarma {

/// Strictly increasing, twice differentiable maps g:(0,1)->R.
/// loglog is taken as -log(-log(mu)) and cloglog as log(-log(1-mu)), so all
/// four links share the same orientation.
enum class LinkKind { logit, probit, loglog, cloglog };

inline const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::logit: return "logit";
    case LinkKind::probit: return "probit";
    case LinkKind::loglog: return "loglog";
    case LinkKind::cloglog: return "cloglog";
  }
  return "logit";
}

inline LinkKind link_from_string(std::string_view name) {
  if (name == "logit") return LinkKind::logit;
  if (name == "probit") return LinkKind::probit;
  if (name == "loglog") return LinkKind::loglog;
  if (name == "cloglog") return LinkKind::cloglog;
  throw std::invalid_argument("unknown link '" + std::string(name) +
                              "' (expected logit, probit, loglog or cloglog)");
}

inline void check_unit_interior(double mu, const char* who) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw std::domain_error(std::string(who) + ": argument must lie strictly in (0,1)");
  }
}

inline double link_eval(LinkKind k, double mu) {
  check_unit_interior(mu, "link_eval");
  switch (k) {
    case LinkKind::logit: return std::log(mu / (1.0 - mu));
    case LinkKind::probit: return normal_quantile(mu);
    case LinkKind::loglog: return -std::log(-std::log(mu));
    case LinkKind::cloglog: return std::log(-std::log1p(-mu));
  }
  return 0.0;
}

/// Inverse link. Saturates into [kMuEps, 1-kMuEps] for extreme eta so the
/// recursion never produces a value indistinguishable from 0 or 1.
inline double link_inv(LinkKind k, double eta) {
  double mu = 0.5;
  switch (k) {
    case LinkKind::logit:
      mu = eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta))
                      : std::exp(eta) / (1.0 + std::exp(eta));
      break;
    case LinkKind::probit:
      mu = normal_cdf(eta);
      break;
    case LinkKind::loglog:
      mu = std::exp(-std::exp(-eta));
      break;
    case LinkKind::cloglog:
      mu = -std::expm1(-std::exp(eta));
      break;
  }
  return std::clamp(mu, kMuEps, 1.0 - kMuEps);
}

inline double link_deriv(LinkKind k, double mu) {
  check_unit_interior(mu, "link_deriv");
  switch (k) {
    case LinkKind::logit: return 1.0 / (mu * (1.0 - mu));
    case LinkKind::probit: return 1.0 / normal_pdf(normal_quantile(mu));
    case LinkKind::loglog: return -1.0 / (mu * std::log(mu));
    case LinkKind::cloglog: return -1.0 / ((1.0 - mu) * std::log1p(-mu));
  }
  return 0.0;
}

}  // namespace uwarma
