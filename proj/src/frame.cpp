#include "framescale/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace framescale {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

FrameMatrix::FrameMatrix(std::size_t dim, std::size_t count, std::vector<double> column_major)
    : dim_(dim), count_(count), data_(std::move(column_major)) {
  if (dim_ == 0 || count_ == 0) throw ValidationError("frame dimensions must be positive");
  if (data_.size() != dim_ * count_)
    throw DimensionError("frame storage does not match dim * count");
  if (!all_finite(data_)) throw ValidationError("frame entries must be finite");
  for (std::size_t j = 0; j < count_; ++j) {
    if (column_norm(j) <= 0.0)
      throw ValidationError("frame column " + std::to_string(j + 1) + " has zero norm");
  }
}

FrameMatrix FrameMatrix::from_columns(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) throw ValidationError("frame needs at least one column");
  const std::size_t n = columns.front().size();
  std::vector<double> data;
  data.reserve(n * columns.size());
  for (const auto& col : columns) {
    if (col.size() != n) throw DimensionError("frame columns have differing lengths");
    data.insert(data.end(), col.begin(), col.end());
  }
  return FrameMatrix(n, columns.size(), std::move(data));
}

std::vector<double> FrameMatrix::column(std::size_t j) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(j * dim_),
          data_.begin() + static_cast<std::ptrdiff_t>((j + 1) * dim_)};
}

double FrameMatrix::column_norm(std::size_t j) const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double x = entry(i, j);
    s += x * x;
  }
  return std::sqrt(s);
}

bool FrameMatrix::spans() const { return matrix_rank(as_matrix(), kRankTol) == dim_; }

Matrix FrameMatrix::as_matrix() const {
  Matrix m(dim_, count_);
  for (std::size_t j = 0; j < count_; ++j)
    for (std::size_t i = 0; i < dim_; ++i) m(i, j) = entry(i, j);
  return m;
}

Scaling::Scaling(std::vector<double> coefficients) : c_(std::move(coefficients)) {
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!std::isfinite(c_[i]))
      throw ValidationError("scaling coefficient " + std::to_string(i + 1) + " is not finite");
    if (c_[i] < 0.0)
      throw ValidationError("scaling coefficient " + std::to_string(i + 1) + " is negative");
  }
}

Scaling Scaling::ones(std::size_t m) { return Scaling(std::vector<double>(m, 1.0)); }
Scaling Scaling::zeros(std::size_t m) { return Scaling(std::vector<double>(m, 0.0)); }

std::vector<std::size_t> Scaling::support(double tol) const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] > tol) s.push_back(i);
  return s;
}

SymmetricMatrix::SymmetricMatrix(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw ValidationError("symmetric matrix must be square");
  const double tol = 1e-12 * std::max(1.0, max_abs(m_));
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = i + 1; j < m_.cols(); ++j)
      if (std::abs(m_(i, j) - m_(j, i)) > tol)
        throw ValidationError("matrix is not symmetric within tolerance");
}

SymmetricMatrix frame_operator(const FrameMatrix& frame, const Scaling& c) {
  if (c.size() != frame.count())
    throw DimensionError("scaling length differs from the number of frame vectors");
  return SymmetricMatrix(weighted_frame_operator(frame, c.coefficients()));
}

Matrix weighted_frame_operator(const FrameMatrix& frame, const std::vector<double>& weights) {
  if (weights.size() != frame.count())
    throw DimensionError("weight length differs from the number of frame vectors");
  const std::size_t n = frame.dim();
  Matrix s(n, n);
  for (std::size_t k = 0; k < frame.count(); ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = w * frame.entry(i, k);
      for (std::size_t j = i; j < n; ++j) s(i, j) += wi * frame.entry(j, k);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s(j, i) = s(i, j);
  return s;
}

GramLift gram_lift(const FrameMatrix& frame) {
  const std::size_t m = frame.count();
  GramLift out;
  out.f = Matrix(m, m);
  out.norms_squared.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ci = frame.column(i);
    out.norms_squared[i] = dot(ci, ci);
    out.f(i, i) = out.norms_squared[i] * out.norms_squared[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      const double ip = dot(ci, frame.column(j));
      out.f(i, j) = ip * ip;
      out.f(j, i) = out.f(i, j);
    }
  }
  out.column_one_norms.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += out.f(i, j);
    out.column_one_norms[j] = s;
  }
  return out;
}

EigenDecomposition sym_eigen(const SymmetricMatrix& a) { return jacobi_eigen(a.entries()); }

namespace {

// Extreme eigenvalues with the PSD clamp shared by the spectral helpers.
struct Extremes {
  double lambda_max;
  double lambda_min;  // clamped to zero when within tolerance
};

Extremes psd_extremes(const SymmetricMatrix& a, const char* op) {
  const auto eig = sym_eigen(a);
  const double lmax = eig.eigenvalues.front();
  double lmin = eig.eigenvalues.back();
  const double tol = 1e-10 * std::max(1.0, std::abs(lmax));
  if (lmin < -tol)
    throw ValidationError(std::string(op) + ": matrix is indefinite (smallest eigenvalue " +
                          std::to_string(lmin) + ")");
  lmin = std::max(lmin, 0.0);
  return {lmax, lmin};
}

}  // namespace

double operator_distance_to_identity(const SymmetricMatrix& a) {
  const auto ex = psd_extremes(a, "operator_distance_to_identity");
  return std::max(std::abs(1.0 - ex.lambda_max), std::abs(1.0 - ex.lambda_min));
}

double frobenius_distance_to_identity(const SymmetricMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i)
    for (std::size_t j = 0; j < a.order(); ++j) {
      const double d = (i == j ? 1.0 : 0.0) - a(i, j);
      s += d * d;
    }
  return std::sqrt(s);
}

double condition_number(const SymmetricMatrix& a) {
  const auto ex = psd_extremes(a, "condition_number");
  if (ex.lambda_min <= kSingularTol * ex.lambda_max || ex.lambda_max <= 0.0)
    return std::numeric_limits<double>::infinity();
  return ex.lambda_max / ex.lambda_min;
}

bool is_full_spark(const FrameMatrix& frame, std::size_t enumeration_cap) {
  const std::size_t n = frame.dim();
  const std::size_t m = frame.count();
  if (m < n) throw DimensionError("full spark needs at least as many vectors as the dimension");
  if (m > enumeration_cap)
    throw CapacityError("full spark enumeration capped at " + std::to_string(enumeration_cap) +
                        " vectors; raise the cap to proceed");

  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    Matrix sub(n, n);
    double norm_product = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) sub(i, j) = frame.entry(i, pick[j]);
      norm_product *= frame.column_norm(pick[j]);
    }
    if (abs_determinant(sub) <= kRankTol * norm_product) return false;

    // next combination in lexicographic order
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (pick[k] != k + m - n) break;
      if (k == 0) return true;
    }
    ++pick[k];
    for (std::size_t j = k + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
}

IndependenceResult outer_products_independent(const FrameMatrix& frame,
                                              const std::vector<std::size_t>& support) {
  for (std::size_t idx : support)
    if (idx >= frame.count())
      throw ValidationError("support index " + std::to_string(idx) + " out of range");
  if (support.empty()) return {true, 0};

  const Matrix lifted = lifted_outer_products(frame);
  Matrix sub(lifted.rows(), support.size());
  for (std::size_t j = 0; j < support.size(); ++j)
    for (std::size_t i = 0; i < lifted.rows(); ++i) sub(i, j) = lifted(i, support[j]);
  const std::size_t rank = matrix_rank(sub, kRankTol);
  return {rank == support.size(), rank};
}

Matrix lifted_outer_products(const FrameMatrix& frame) {
  const std::size_t n = frame.dim();
  const std::size_t m = frame.count();
  Matrix g(svec_length(n), m);
  for (std::size_t k = 0; k < m; ++k) {
    Matrix outer(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) outer(i, j) = frame.entry(i, k) * frame.entry(j, k);
    const auto col = svec(outer);
    for (std::size_t i = 0; i < col.size(); ++i) g(i, k) = col[i];
  }
  return g;
}

}  // namespace framescale
