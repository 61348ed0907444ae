#pragma once

// Test-only reference computations, kept independent of the library code
// paths they are used to check.

#include <algorithm>
#include <cmath>
#include <vector>

#include "framescale/frame.hpp"

namespace oracles {

// Spectral norm of a square matrix via power iteration on B^T B.
inline double spectral_norm(const framescale::Matrix& b) {
  const std::size_t n = b.cols();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(n)) + 1e-3 * static_cast<double>(i);
  double norm = 0.0;
  for (int it = 0; it < 2000; ++it) {
    // w = B^T (B v)
    std::vector<double> bv(b.rows(), 0.0);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) bv[i] += b(i, j) * v[j];
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) w[j] += b(i, j) * bv[i];
    norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / norm;
  }
  return std::sqrt(norm);
}

// Projected gradient for min_{c>=0} ||I - S(c)||_F, run to high iteration
// count. Uses its own power iteration for the step size.
inline double projected_gradient_residual(const framescale::FrameMatrix& frame,
                                          std::size_t iterations,
                                          std::vector<double>* coefficients = nullptr) {
  using framescale::Matrix;
  const auto lift = framescale::gram_lift(frame);
  const std::size_t m = frame.count();

  std::vector<double> v(m, 1.0);
  double lmax = 1.0;
  for (int it = 0; it < 500; ++it) {
    auto w = framescale::matvec(lift.f, v);
    lmax = framescale::norm2(w);
    if (lmax == 0.0) break;
    for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / lmax;
  }
  const double step = 0.9 / std::max(lmax, 1e-300);

  std::vector<double> c(m, 0.0);
  for (std::size_t k = 0; k < iterations; ++k) {
    const auto fc = framescale::matvec(lift.f, c);
    for (std::size_t i = 0; i < m; ++i)
      c[i] = std::max(0.0, c[i] - step * (fc[i] - lift.norms_squared[i]));
  }
  if (coefficients) *coefficients = c;

  // h(c) = c^T F c - 2 g^T c + N, clamped against roundoff
  const auto fc = framescale::matvec(lift.f, c);
  double h = static_cast<double>(frame.dim());
  for (std::size_t i = 0; i < m; ++i) h += c[i] * fc[i] - 2.0 * c[i] * lift.norms_squared[i];
  return std::sqrt(std::max(h, 0.0));
}

// Refined coordinate grid search for the Frobenius problem; practical for
// M <= 3.
inline double grid_search_residual(const framescale::FrameMatrix& frame, double hi = 4.0,
                                   int rounds = 12) {
  const std::size_t m = frame.count();
  const int points = 9;
  std::vector<double> center(m, hi / 2.0);
  double radius = hi / 2.0;
  double best = std::numeric_limits<double>::infinity();

  std::vector<double> c(m, 0.0);
  for (int round = 0; round < rounds; ++round) {
    std::vector<double> best_c = center;
    std::vector<int> idx(m, 0);
    while (true) {
      for (std::size_t i = 0; i < m; ++i) {
        const double offset = (2.0 * idx[i] / (points - 1) - 1.0) * radius;
        c[i] = std::max(0.0, center[i] + offset);
      }
      const auto s = framescale::weighted_frame_operator(frame, c);
      double h = 0.0;
      for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) {
          const double d = (i == j ? 1.0 : 0.0) - s(i, j);
          h += d * d;
        }
      if (h < best) {
        best = h;
        best_c = c;
      }
      std::size_t carry = 0;
      while (carry < m && ++idx[carry] == points) idx[carry++] = 0;
      if (carry == m) break;
    }
    center = best_c;
    radius /= 3.0;
  }
  return std::sqrt(best);
}

// Plain Gaussian elimination with partial pivoting for small dense systems.
inline std::vector<double> gauss_solve(framescale::Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

}  // namespace oracles
