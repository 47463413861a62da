#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace uwarma {

/// Dense row-major matrix. Everything in this library is tiny (parameter
/// dimension at most a few dozen), so no attempt at blocking or views.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  if (a.cols != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(a.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

/// In-place lower Cholesky factor of a symmetric matrix. Returns false when
/// the matrix is not numerically positive definite.
inline bool cholesky_factor(Matrix& a) {
  const std::size_t n = a.rows;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    a(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / a(j, j);
    }
  }
  return true;
}

inline std::vector<double> cholesky_solve(const Matrix& chol, const std::vector<double>& b) {
  const std::size_t n = chol.rows;
  std::vector<double> x(b);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= chol(i, k) * x[k];
    x[i] /= chol(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= chol(k, ii) * x[k];
    x[ii] /= chol(ii, ii);
  }
  return x;
}

/// Cyclic Jacobi eigendecomposition for symmetric matrices.
/// Returns eigenvalues (ascending) and the matching orthonormal columns.
inline void jacobi_eigen(const Matrix& a_in, std::vector<double>& values, Matrix& vectors) {
  const std::size_t n = a_in.rows;
  Matrix a = a_in;
  vectors = Matrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = vectors(k, p), vkq = vectors(k, q);
          vectors(k, p) = c * vkp - s * vkq;
          vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  // Sort ascending, carrying the eigenvector columns along.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = i;
    for (std::size_t j = i + 1; j < n; ++j)
      if (values[j] < values[m]) m = j;
    if (m != i) {
      std::swap(values[i], values[m]);
      for (std::size_t k = 0; k < n; ++k) std::swap(vectors(k, i), vectors(k, m));
    }
  }
}

struct SymInverseResult {
  Matrix inverse;
  bool positive_definite = false;
  bool rank_deficient = false;
  double min_eigenvalue = 0.0;
  double condition_number = 0.0;
};

/// Inverse of a symmetric matrix: Cholesky when positive definite, otherwise
/// an eigenvalue pseudo-inverse with small modes dropped.
inline SymInverseResult sym_inverse(const Matrix& a) {
  const std::size_t n = a.rows;
  SymInverseResult out;

  std::vector<double> evals;
  Matrix evecs;
  jacobi_eigen(a, evals, evecs);
  out.min_eigenvalue = evals.empty() ? 0.0 : evals.front();
  double emax = 0.0;
  for (double v : evals) emax = std::max(emax, std::abs(v));
  double emin_abs = emax;
  for (double v : evals) emin_abs = std::min(emin_abs, std::abs(v));
  out.condition_number = emin_abs > 0.0 ? emax / emin_abs : std::numeric_limits<double>::infinity();

  Matrix chol = a;
  if (cholesky_factor(chol)) {
    out.positive_definite = true;
    out.inverse = Matrix(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = 1.0;
      std::vector<double> col = cholesky_solve(chol, e);
      for (std::size_t i = 0; i < n; ++i) out.inverse(i, j) = col[i];
      e[j] = 0.0;
    }
    return out;
  }

  const double cutoff = emax * 1e-12;
  out.rank_deficient = true;
  out.inverse = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(evals[k]) <= cutoff) continue;
    double w = 1.0 / evals[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.inverse(i, j) += w * evecs(i, k) * evecs(j, k);
  }
  return out;
}

/// All complex roots of c[0] + c[1] z + ... + c[d] z^d via Durand-Kerner.
/// Good enough for the low-degree ARMA sanity checks.
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
  std::vector<double> c(coeffs);
  while (c.size() > 1 && std::abs(c.back()) < 1e-14) c.pop_back();
  const std::size_t d = c.size() - 1;
  std::vector<std::complex<double>> roots;
  if (d == 0) return roots;

  std::vector<std::complex<double>> z(d);
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc(1.0, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    acc *= seed;
    z[i] = acc;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v(0.0, 0.0);
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
  };
  for (int it = 0; it < 500; ++it) {
    double shift = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      std::complex<double> denom(c[d], 0.0);
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      std::complex<double> delta = eval(z[i]) / denom;
      z[i] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-13) break;
  }
  return z;
}

}  // namespace uwarma
