#pragma once

#include <optional>
#include <vector>

#include "framescale/frame.hpp"
#include "framescale/operator_scaling.hpp"

namespace framescale {

/// Unconstrained projection of the identity onto span{phi_i phi_i^T}.
struct ProjectionResult {
  std::vector<double> coefficients;  // may be negative
  double residual = 0.0;
  /// True when the outer products are linearly independent, in which case
  /// the coefficients are the unique solution of F c = g. Otherwise they are
  /// the minimum-norm least-squares solution.
  bool unique = false;
};

/// Sufficient invertibility certificate for the Frobenius-optimal operator
/// of a unit-norm frame: if the spread of the one-norms of F's columns stays
/// below the smallest singular value of F, the solution of F a = g is
/// entrywise positive and the cone projection equals the subspace
/// projection.
struct SpreadCertificate {
  double one_norm_spread = 0.0;
  double smallest_singular_value = 0.0;
  bool independent = false;
  bool holds = false;
  std::optional<std::vector<double>> positive_scaling;
};

struct InvertibilityReport {
  bool frobenius_operator_invertible = false;
  double min_eigenvalue = 0.0;
  std::size_t support_size = 0;
};

/// Lawson-Hanson style active-set nonnegative least squares:
/// min ||A x - b||_2 subject to x >= 0. Terminates finitely; the dual
/// feasibility test uses dual_tol. An optional warm support seeds the
/// passive set (infeasible entries are pruned before the main loop).
struct NnlsResult {
  std::vector<double> x;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
};

NnlsResult nnls(const Matrix& a, const std::vector<double>& b, double dual_tol = 1e-10,
                const std::vector<std::size_t>& warm_support = {});

/// Exact projection of the identity onto the cone {S(c) : c >= 0} via NNLS
/// on the lifted system with columns svec(phi_i phi_i^T).
ScalingSolution minimize_frobenius(const FrameMatrix& frame);

/// Solves F c = g with unrestricted sign (minimum-norm solution when F is
/// singular).
ProjectionResult unconstrained_projection(const FrameMatrix& frame);

/// Largest violation of the first-order optimality system: |F c - g| on the
/// support of c and max(0, g - F c) off it. Zero exactly at Frobenius
/// optima.
double kkt_residual(const FrameMatrix& frame, const Scaling& c);

/// True when the Frobenius residual is at most tol, i.e. some c >= 0 makes
/// S(c) the identity within tol.
bool is_scalable(const FrameMatrix& frame, double tol = 1e-8);

SpreadCertificate spread_certificate(const FrameMatrix& frame);

InvertibilityReport invertibility_report(const FrameMatrix& frame);

}  // namespace framescale
