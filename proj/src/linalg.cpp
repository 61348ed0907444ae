#include "framescale/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "framescale/errors.hpp"

namespace framescale {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix difference: shapes differ");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: dimensions differ");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s = std::max(s, std::abs(v));
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionError("dot: lengths differ");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

std::vector<double> scaled(const std::vector<double>& v, double factor) {
  std::vector<double> out(v);
  for (double& x : out) x *= factor;
  return out;
}

std::size_t svec_length(std::size_t n) { return n * (n + 1) / 2; }

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

std::vector<double> svec(const Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> v;
  v.reserve(svec_length(n));
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(a(i, i));
    for (std::size_t j = i + 1; j < n; ++j) v.push_back(kSqrt2 * a(i, j));
  }
  return v;
}

Matrix svec_inverse(const std::vector<double>& v, std::size_t n) {
  if (v.size() != svec_length(n)) throw DimensionError("svec_inverse: wrong length");
  Matrix a(n, n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = v[k++];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = v[k++] / kSqrt2;
      a(i, j) = x;
      a(j, i) = x;
    }
  }
  return a;
}

EigenDecomposition jacobi_eigen(const Matrix& symmetric) {
  const std::size_t n = symmetric.rows();
  if (n != symmetric.cols()) throw DimensionError("jacobi_eigen: matrix not square");

  // Work on the symmetrized copy so tiny asymmetries cannot bias the sweep.
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (symmetric(i, j) + symmetric(j, i));
  Matrix v = Matrix::identity(n);

  const double norm = frobenius_norm(a);
  if (norm > 0.0) {
    const double stop = 1e-12 * norm;
    const std::size_t max_sweeps = 64;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
      double off = 0.0;
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
      if (std::sqrt(off) <= stop) break;

      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (apq == 0.0) continue;
          const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
          double t;
          if (std::abs(theta) > 1e150) {
            t = 0.5 / theta;
          } else {
            t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            if (theta < 0.0) t = -t;
          }
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;

          const double app = a(p, p);
          const double aqq = a(q, q);
          a(p, p) = app - t * apq;
          a(q, q) = aqq + t * apq;
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            if (i == p || i == q) continue;
            const double aip = a(i, p);
            const double aiq = a(i, q);
            a(i, p) = c * aip - s * aiq;
            a(p, i) = a(i, p);
            a(i, q) = s * aip + c * aiq;
            a(q, i) = a(i, q);
          }
          for (std::size_t i = 0; i < n; ++i) {
            const double vip = v(i, p);
            const double viq = v(i, q);
            v(i, p) = c * vip - s * viq;
            v(i, q) = s * vip + c * viq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

PivotedQr pivoted_qr(const Matrix& a, double rank_tol) {
  PivotedQr f;
  f.m = a.rows();
  f.n = a.cols();
  f.r = a;
  f.perm.resize(f.n);
  std::iota(f.perm.begin(), f.perm.end(), 0);

  const std::size_t steps = std::min(f.m, f.n);
  std::vector<double> diag;
  diag.reserve(steps);

  for (std::size_t k = 0; k < steps; ++k) {
    // Pivot on the largest remaining column (ties resolve to the smallest
    // index so the factorization is deterministic).
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < f.n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < f.m; ++i) s += f.r(i, j) * f.r(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < f.m; ++i) std::swap(f.r(i, k), f.r(i, best));
      std::swap(f.perm[k], f.perm[best]);
    }

    const double col_norm = std::sqrt(std::max(best_norm, 0.0));
    std::vector<double> h(f.m, 0.0);
    double beta = 0.0;
    if (col_norm > 0.0) {
      const double alpha = (f.r(k, k) >= 0.0) ? -col_norm : col_norm;
      h[k] = f.r(k, k) - alpha;
      for (std::size_t i = k + 1; i < f.m; ++i) h[i] = f.r(i, k);
      const double hnorm2 = dot(h, h);
      if (hnorm2 > 0.0) {
        beta = 2.0 / hnorm2;
        for (std::size_t j = k; j < f.n; ++j) {
          double w = 0.0;
          for (std::size_t i = k; i < f.m; ++i) w += h[i] * f.r(i, j);
          w *= beta;
          for (std::size_t i = k; i < f.m; ++i) f.r(i, j) -= w * h[i];
        }
      }
      f.r(k, k) = alpha;
      for (std::size_t i = k + 1; i < f.m; ++i) f.r(i, k) = 0.0;
    }
    f.householders.push_back(std::move(h));
    f.betas.push_back(beta);
    diag.push_back(std::abs(f.r(k, k)));
  }

  const double scale = diag.empty() ? 0.0 : diag[0];
  f.rank = 0;
  for (std::size_t k = 0; k < diag.size(); ++k) {
    if (diag[k] > rank_tol * scale && diag[k] > 0.0)
      f.rank = k + 1;
    else
      break;
  }
  return f;
}

std::vector<double> qr_solve(const PivotedQr& f, std::vector<double> b) {
  if (b.size() != f.m) throw DimensionError("qr_solve: rhs length differs from row count");
  for (std::size_t k = 0; k < f.householders.size(); ++k) {
    if (f.betas[k] == 0.0) continue;
    const auto& h = f.householders[k];
    double w = 0.0;
    for (std::size_t i = k; i < f.m; ++i) w += h[i] * b[i];
    w *= f.betas[k];
    for (std::size_t i = k; i < f.m; ++i) b[i] -= w * h[i];
  }
  std::vector<double> x(f.n, 0.0);
  for (std::size_t kk = f.rank; kk-- > 0;) {
    double s = b[kk];
    for (std::size_t j = kk + 1; j < f.rank; ++j) s -= f.r(kk, j) * x[f.perm[j]];
    x[f.perm[kk]] = s / f.r(kk, kk);
  }
  return x;
}

std::size_t matrix_rank(const Matrix& a, double rank_tol) {
  return pivoted_qr(a, rank_tol).rank;
}

double abs_determinant(Matrix a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw DimensionError("abs_determinant: matrix not square");
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) return 0.0;
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return std::abs(det);
}

}  // namespace framescale
