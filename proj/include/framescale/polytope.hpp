#pragma once

#include <vector>

#include "framescale/frame.hpp"

namespace framescale {

/// The set of Frobenius-optimal scalings {c >= 0 : S(c) = T} is a polytope;
/// its vertices are the minimal optimal scalings.
struct PolytopeDescription {
  SymmetricMatrix optimal_operator;
  std::vector<Scaling> vertices;
  std::vector<std::vector<std::size_t>> supports;  // aligned with vertices, 0-based
};

/// Enumerates the vertices by walking supports with independent lifted
/// columns (dependent prefixes prune the whole branch) and solving each
/// candidate support exactly against the optimal operator.
PolytopeDescription enumerate_minimal_scalings(const FrameMatrix& frame,
                                               std::size_t max_support_enumeration = 20);

/// True when c is an optimal scaling whose supported outer products are
/// independent and no proper sub-support reproduces the optimal operator
/// with nonnegative coefficients. Requires kkt_residual(c) <= 1e-6.
bool is_minimal_scaling(const FrameMatrix& frame, const Scaling& c);

/// True when c >= 0 and S(c) matches the description's optimal operator
/// within 1e-7 in Frobenius norm.
bool polytope_membership(const FrameMatrix& frame, const Scaling& c,
                         const PolytopeDescription& description);

}  // namespace framescale
