#pragma once

#include <cstddef>
#include <vector>

#include "framescale/errors.hpp"
#include "framescale/linalg.hpp"

namespace framescale {

/// Relative tolerance used by every independence / spark / span rank test.
inline constexpr double kRankTol = 1e-10;
/// Relative eigenvalue threshold below which an operator counts as singular.
inline constexpr double kSingularTol = 1e-12;

/// A finite family of frame vectors, stored as the columns of an N x M
/// matrix. Spanning is not required; non-spanning families simply have
/// condition number infinity.
class FrameMatrix {
 public:
  /// column_major holds the M columns back to back, each of length dim.
  FrameMatrix(std::size_t dim, std::size_t count, std::vector<double> column_major);

  static FrameMatrix from_columns(const std::vector<std::vector<double>>& columns);

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return count_; }

  double entry(std::size_t row, std::size_t col) const { return data_[col * dim_ + row]; }
  std::vector<double> column(std::size_t j) const;
  double column_norm(std::size_t j) const;
  const std::vector<double>& column_major() const { return data_; }

  /// True when the columns span the ambient space (rank == dim).
  bool spans() const;

  Matrix as_matrix() const;

 private:
  std::size_t dim_;
  std::size_t count_;
  std::vector<double> data_;
};

/// Nonnegative scaling coefficients; entry i plays the role of the squared
/// scalar applied to frame vector i.
class Scaling {
 public:
  Scaling() = default;
  explicit Scaling(std::vector<double> coefficients);

  static Scaling ones(std::size_t m);
  static Scaling zeros(std::size_t m);

  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  const std::vector<double>& coefficients() const { return c_; }
  std::vector<std::size_t> support(double tol = 0.0) const;

 private:
  std::vector<double> c_;
};

/// Square matrix validated to be symmetric within
/// 1e-12 * max(1, magnitude scale).
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Matrix entries);

  std::size_t order() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& entries() const { return m_; }

 private:
  Matrix m_;
};

/// Gram data of the rank-one outer products: F(i,j) = <phi_i, phi_j>^2,
/// g(i) = ||phi_i||^2, and the one-norms of F's columns.
struct GramLift {
  Matrix f;
  std::vector<double> norms_squared;
  std::vector<double> column_one_norms;
};

struct IndependenceResult {
  bool independent = false;
  std::size_t rank = 0;
};

/// S(c) = sum_i c_i phi_i phi_i^T.
SymmetricMatrix frame_operator(const FrameMatrix& frame, const Scaling& c);

/// Same sum with unrestricted real weights (used by unconstrained
/// projections, where coefficients may be negative).
Matrix weighted_frame_operator(const FrameMatrix& frame, const std::vector<double>& weights);

GramLift gram_lift(const FrameMatrix& frame);

EigenDecomposition sym_eigen(const SymmetricMatrix& a);

/// ||I - A||_2 = max(|1 - lambda_max|, |1 - lambda_min|) for PSD A.
/// Eigenvalues in [-1e-10 * max(1, lambda_max), 0) clamp to zero; anything
/// lower is rejected as indefinite.
double operator_distance_to_identity(const SymmetricMatrix& a);

/// ||I - A||_F, equal to sqrt(sum_k (1 - lambda_k)^2).
double frobenius_distance_to_identity(const SymmetricMatrix& a);

/// lambda_max / lambda_min for PSD A; +infinity when
/// lambda_min <= kSingularTol * lambda_max (the zero matrix included).
double condition_number(const SymmetricMatrix& a);

/// True when every N-subset of columns is linearly independent. Enumerates
/// all C(M, N) minors, so M is capped.
bool is_full_spark(const FrameMatrix& frame, std::size_t enumeration_cap = 20);

/// Rank of {svec(phi_i phi_i^T) : i in support}; independent when the rank
/// equals the support size. The empty support has rank 0 and is independent.
IndependenceResult outer_products_independent(const FrameMatrix& frame,
                                              const std::vector<std::size_t>& support);

/// D x M matrix whose column i is svec(phi_i phi_i^T), D = N(N+1)/2.
Matrix lifted_outer_products(const FrameMatrix& frame);

}  // namespace framescale
