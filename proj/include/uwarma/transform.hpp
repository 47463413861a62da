#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwarma/csv.hpp"
#include "uwarma/model.hpp"

namespace uwarma {

/// Stationarity transformations for covariates, keyed by the usual tcode
/// convention: 1 level, 2 first difference, 5 difference of logs, 6 second
/// difference of logs. Leading entries that the transformation consumes are
/// returned as NaN and trimmed by prepare_frame.
inline std::vector<double> apply_tcode(std::vector<double> x, int code,
                                       const std::string& name = "covariate") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto diff = [&](std::vector<double> v) {
    std::vector<double> d(v.size(), nan);
    for (std::size_t t = 1; t < v.size(); ++t) {
      d[t] = (std::isnan(v[t]) || std::isnan(v[t - 1])) ? nan : v[t] - v[t - 1];
    }
    return d;
  };
  auto logs = [&](std::vector<double> v) {
    for (auto& e : v) {
      if (std::isnan(e)) continue;
      if (!(e > 0.0)) {
        throw std::invalid_argument("tcode log transform: '" + name +
                                    "' has non-positive values");
      }
      e = std::log(e);
    }
    return v;
  };
  switch (code) {
    case 1: return x;
    case 2: return diff(std::move(x));
    case 5: return diff(logs(std::move(x)));
    case 6: return diff(diff(logs(std::move(x))));
    default:
      throw std::invalid_argument("unsupported tcode " + std::to_string(code) +
                                  " (expected 1, 2, 5 or 6)");
  }
}

struct FrameOptions {
  /// one tcode per covariate column; empty = leave all in levels
  std::vector<int> tcodes;
  /// expand each covariate into lags 1..lags (0 = use columns as given)
  int lags = 0;
};

struct PreparedFrame {
  SeriesData data;
  std::vector<std::string> covariate_names;
  std::vector<std::string> dates;
  /// rows consumed at the front by transformations and lagging
  std::size_t dropped_front = 0;
};

/// Applies tcode transformations to the covariates (never to y), then the
/// lag expansion: each column v becomes v_lag1..v_lagk, and the rows where
/// any regressor is undefined are dropped from the front.
inline PreparedFrame prepare_frame(const LoadedSeries& in, const FrameOptions& opts) {
  const std::size_t n = in.data.y.size();
  const std::size_t ncov = in.data.X.cols;
  if (!opts.tcodes.empty() && opts.tcodes.size() != ncov) {
    throw std::invalid_argument("prepare_frame: need one tcode per covariate (" +
                                std::to_string(ncov) + " columns, " +
                                std::to_string(opts.tcodes.size()) + " codes)");
  }
  if (opts.lags < 0) throw std::invalid_argument("prepare_frame: lags must be nonnegative");

  std::vector<std::vector<double>> cols(ncov);
  for (std::size_t c = 0; c < ncov; ++c) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) v[t] = in.data.X(t, c);
    cols[c] = opts.tcodes.empty() ? std::move(v)
                                  : apply_tcode(std::move(v), opts.tcodes[c],
                                                in.covariate_names[c]);
  }

  std::size_t lead = 0;
  for (const auto& v : cols) {
    std::size_t k = 0;
    while (k < v.size() && std::isnan(v[k])) ++k;
    lead = std::max(lead, k);
  }
  const std::size_t lags = static_cast<std::size_t>(opts.lags);
  const std::size_t start = lead + lags;
  if (start >= n) throw std::invalid_argument("prepare_frame: transformations and lags consume "
                                              "the whole series");

  PreparedFrame out;
  out.dropped_front = start;
  out.data.y.assign(in.data.y.begin() + start, in.data.y.end());
  if (!in.dates.empty()) out.dates.assign(in.dates.begin() + start, in.dates.end());

  const std::size_t kept = n - start;
  if (ncov > 0) {
    if (lags == 0) {
      out.covariate_names = in.covariate_names;
      out.data.X = Matrix(kept, ncov);
      for (std::size_t t = 0; t < kept; ++t)
        for (std::size_t c = 0; c < ncov; ++c) out.data.X(t, c) = cols[c][start + t];
    } else {
      out.data.X = Matrix(kept, ncov * lags);
      for (std::size_t c = 0; c < ncov; ++c) {
        for (std::size_t l = 1; l <= lags; ++l) {
          out.covariate_names.push_back(in.covariate_names[c] + "_lag" + std::to_string(l));
          const std::size_t col = c * lags + (l - 1);
          for (std::size_t t = 0; t < kept; ++t) out.data.X(t, col) = cols[c][start + t - l];
        }
      }
    }
  }
  out.data.validate();
  return out;
}

}  // namespace uwarma
