#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "uwarma/linalg.hpp"

namespace uwarma {

using ValueFn = std::function<double(const std::vector<double>&)>;
using ValueGradFn = std::function<double(const std::vector<double>&, std::vector<double>&)>;

struct OptimOptions {
  int max_iter = 500;
  double grad_tol = 1e-7;
  double f_rel_tol = 1e-12;
  /// Optional override for the convergence norm of the gradient, e.g. to
  /// measure it in a reparameterized space.
  std::function<double(const std::vector<double>&, const std::vector<double>&)> grad_norm;
};

struct OptimResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  std::vector<double> grad;
  int iterations = 0;
  bool converged_grad = false;
  bool converged_f = false;
  bool line_search_failed = false;
};

/// BFGS minimization with backtracking Armijo line search. `value` is used
/// inside the line search (it may return +inf to reject a trial point);
/// `value_grad` is evaluated only at accepted iterates. Fully deterministic.
inline OptimResult bfgs_minimize(const ValueFn& value, const ValueGradFn& value_grad,
                                 std::vector<double> x0, const OptimOptions& opts = {}) {
  const std::size_t n = x0.size();
  auto gnorm = [&](const std::vector<double>& x, const std::vector<double>& g) {
    if (opts.grad_norm) return opts.grad_norm(x, g);
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
  };

  OptimResult res;
  res.x = std::move(x0);
  res.grad.assign(n, 0.0);
  res.f = value_grad(res.x, res.grad);
  if (!std::isfinite(res.f)) {
    res.line_search_failed = true;
    return res;
  }

  // start with a conservatively scaled inverse Hessian so the first trial
  // step has roughly unit norm even when the gradient is huge
  double g0norm = 0.0;
  for (double v : res.grad) g0norm += v * v;
  g0norm = std::sqrt(g0norm);
  Matrix H = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) H(i, i) = 1.0 / std::max(1.0, g0norm);
  bool scaled_once = false;

  std::vector<double> p(n), xnew(n), gnew(n), s(n), yv(n);
  int tiny_streak = 0;  // f-based stop only after several negligible steps in a row

  for (int it = 0; it < opts.max_iter; ++it) {
    res.iterations = it;
    if (gnorm(res.x, res.grad) < opts.grad_tol) {
      res.converged_grad = true;
      return res;
    }

    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v -= H(i, j) * res.grad[j];
      p[i] = v;
    }
    double gtp = 0.0;
    for (std::size_t i = 0; i < n; ++i) gtp += res.grad[i] * p[i];
    if (!(gtp < 0.0)) {  // not a descent direction: reset to steepest descent
      H = Matrix::identity(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = -res.grad[i];
      gtp = 0.0;
      for (std::size_t i = 0; i < n; ++i) gtp += res.grad[i] * p[i];
      if (!(gtp < 0.0)) {
        res.converged_grad = true;  // zero gradient
        return res;
      }
    }

    constexpr double c1 = 1e-4;
    double alpha = 1.0;
    double fnew = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) xnew[i] = res.x[i] + alpha * p[i];
      fnew = value(xnew);
      if (std::isfinite(fnew) && fnew <= res.f + c1 * alpha * gtp) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.line_search_failed = true;
      return res;
    }

    double fexact = value_grad(xnew, gnew);
    const double fold = res.f;
    res.f = fexact;

    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xnew[i] - res.x[i];
      yv[i] = gnew[i] - res.grad[i];
    }
    res.x = xnew;
    res.grad = gnew;

    // a negligible improvement from a full-size step means convergence; the
    // same improvement from a collapsed line search just means we are stuck
    if (alpha >= 1e-2 &&
        std::abs(fold - res.f) <= opts.f_rel_tol * std::max(1.0, std::abs(res.f))) {
      if (++tiny_streak >= 6) {
        res.converged_f = true;
        res.iterations = it + 1;
        return res;
      }
    } else {
      tiny_streak = 0;
    }

    double ys = 0.0, snorm = 0.0, ynorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ys += yv[i] * s[i];
      snorm += s[i] * s[i];
      ynorm += yv[i] * yv[i];
    }
    if (ys > 1e-12 * std::sqrt(snorm * ynorm) && ys > 0.0) {
      if (!scaled_once) {
        // Shanno-Phua: size the inverse Hessian from the first curvature pair
        const double gamma0 = ys / ynorm;
        H = Matrix::identity(n);
        for (std::size_t i = 0; i < n; ++i) H(i, i) = gamma0;
        scaled_once = true;
      }
      // H <- (I - s y'/ys) H (I - y s'/ys) + s s'/ys
      const double rho = 1.0 / ys;
      std::vector<double> hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) hy[i] += H(i, j) * yv[j];
      double yhy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yhy += yv[i] * hy[i];
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          H(i, j) += rho * rho * yhy * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]) +
                     rho * s[i] * s[j];
        }
      }
    }
  }
  res.iterations = opts.max_iter;
  return res;
}

/// Nelder-Mead fallback for the rare fits where the quasi-Newton line search
/// stalls. Standard reflect/expand/contract/shrink with a deterministic
/// initial simplex.
inline OptimResult nelder_mead_minimize(const ValueFn& value, std::vector<double> x0,
                                        int max_iter = 2000, double size_tol = 1e-10) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> vx(n + 1, x0);
  std::vector<double> vf(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double step = 0.05 * std::max(1.0, std::abs(x0[i]));
    vx[i + 1][i] += step;
  }
  for (std::size_t i = 0; i <= n; ++i) vf[i] = value(vx[i]);

  auto order = [&]() {
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j)
        if (vf[j] < vf[i]) {
          std::swap(vf[i], vf[j]);
          std::swap(vx[i], vx[j]);
        }
  };

  OptimResult res;
  int it = 0;
  for (; it < max_iter; ++it) {
    order();
    double spread = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      spread = std::max(spread, std::abs(vx[n][i] - vx[0][i]));
    double fspread = std::abs(vf[n] - vf[0]);
    if (std::isfinite(vf[0]) && spread < size_tol &&
        fspread < size_tol * std::max(1.0, std::abs(vf[0]))) {
      res.converged_f = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += vx[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + coef * (centroid[k] - vx[n][k]);
      return p;
    };

    std::vector<double> xr = blend(1.0);
    double fr = value(xr);
    if (fr < vf[0]) {
      std::vector<double> xe = blend(2.0);
      double fe = value(xe);
      if (fe < fr) {
        vx[n] = xe;
        vf[n] = fe;
      } else {
        vx[n] = xr;
        vf[n] = fr;
      }
    } else if (fr < vf[n - 1]) {
      vx[n] = xr;
      vf[n] = fr;
    } else {
      std::vector<double> xc = blend(fr < vf[n] ? 0.5 : -0.5);
      double fc = value(xc);
      if (fc < std::min(fr, vf[n])) {
        vx[n] = xc;
        vf[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k) vx[i][k] = vx[0][k] + 0.5 * (vx[i][k] - vx[0][k]);
          vf[i] = value(vx[i]);
        }
      }
    }
  }
  order();
  res.x = vx[0];
  res.f = vf[0];
  res.iterations = it;
  return res;
}

}  // namespace uwarma
