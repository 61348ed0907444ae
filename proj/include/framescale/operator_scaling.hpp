#pragma once

#include <cstdint>
#include <optional>

#include "framescale/frame.hpp"

namespace framescale {

enum class NormKind { kOperator, kFrobenius };

struct SolverOptions {
  std::size_t max_iterations = 5000;
  double step_scale = 1.0;
  double objective_tol = 1e-9;
  std::size_t stagnation_window = 200;
  double balance_tol = 1e-6;
  std::uint64_t seed = 1;  // reserved for randomized restarts
  /// Defaults to the balanced all-ones scaling when absent.
  std::optional<Scaling> warm_start;

  void validate() const;
};

/// Result of a scaling solve under either norm.
///
/// kkt_residual carries the stationarity certificate appropriate to the
/// norm: the complementary-slackness violation for Frobenius solutions and
/// the balance gap |lambda_max + lambda_min - 2| for operator solutions.
struct ScalingSolution {
  Scaling scaling;
  SymmetricMatrix scaled_operator;
  NormKind norm_kind = NormKind::kOperator;
  double residual = 0.0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double condition_number = 0.0;  // +infinity when the operator is singular
  std::size_t iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
};

/// Multiplies c by 2 / (lambda_max + lambda_min) of S(c) so the extreme
/// eigenvalues sit symmetrically about 1. Never increases ||I - S(c)||_2.
Scaling balance_rescale(const FrameMatrix& frame, const Scaling& c);

/// min_{c >= 0} ||I - S(c)||_2 by projected subgradient steps followed by a
/// balance rescale after every step. Deterministic given (frame, options).
ScalingSolution minimize_operator_norm(const FrameMatrix& frame, const SolverOptions& opts = {});

/// Best achievable condition number over nonnegative scalings. Solves the
/// operator-norm problem; at a balanced optimum with residual f the
/// condition number is (1 + f) / (1 - f). Non-spanning frames get the
/// infinity sentinel with the zero scaling.
ScalingSolution min_condition_scaling(const FrameMatrix& frame, const SolverOptions& opts = {});

/// Spanning frame of M unit vectors clustered around e_1 whose solved
/// operator residual is at least 1 - epsilon. The cluster radius shrinks
/// until the solver verifies the bound.
FrameMatrix tightness_witness(std::size_t dim, std::size_t count, double epsilon,
                              std::uint64_t seed);

}  // namespace framescale
