#include "framescale/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "framescale/frobenius.hpp"

namespace framescale {

namespace {

constexpr double kReconstructionTol = 1e-7;
constexpr double kCoefficientTol = 1e-10;

Matrix columns_of(const Matrix& a, const std::vector<std::size_t>& cols) {
  Matrix sub(a.rows(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) sub(i, j) = a(i, cols[j]);
  return sub;
}

double reconstruction_error(const Matrix& sub, const std::vector<double>& x,
                            const std::vector<double>& target) {
  auto ax = matvec(sub, x);
  double s = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double d = target[i] - ax[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

PolytopeDescription enumerate_minimal_scalings(const FrameMatrix& frame,
                                               std::size_t max_support_enumeration) {
  const std::size_t m = frame.count();
  if (m > max_support_enumeration)
    throw CapacityError("support enumeration capped at " +
                        std::to_string(max_support_enumeration) +
                        " vectors; raise the cap to proceed");

  const auto sol = minimize_frobenius(frame);
  const Matrix lifted = lifted_outer_products(frame);
  const auto target = svec(sol.scaled_operator.entries());
  const std::size_t max_size = pivoted_qr(lifted, kRankTol).rank;

  // Vertices keyed by their support; DFS in index order keeps the
  // enumeration deterministic and dependent prefixes prune whole branches.
  std::map<std::vector<std::size_t>, Scaling> found;
  std::vector<std::size_t> support;

  auto visit = [&](auto&& self, std::size_t start) -> void {
    if (!support.empty()) {
      const Matrix sub = columns_of(lifted, support);
      const auto qr = pivoted_qr(sub, kRankTol);
      if (qr.rank < support.size()) return;  // dependent; no superset can recover

      auto x = qr_solve(qr, target);
      if (reconstruction_error(sub, x, target) <= kReconstructionTol &&
          std::all_of(x.begin(), x.end(), [](double v) { return v >= -kCoefficientTol; })) {
        std::vector<std::size_t> actual;
        std::vector<double> full(m, 0.0);
        for (std::size_t j = 0; j < support.size(); ++j) {
          if (x[j] > kCoefficientTol) {
            actual.push_back(support[j]);
            full[support[j]] = x[j];
          }
        }
        if (!actual.empty() && !found.count(actual)) found.emplace(actual, Scaling(full));
      }
      if (support.size() == max_size) return;
    }
    for (std::size_t j = start; j < m; ++j) {
      support.push_back(j);
      self(self, j + 1);
      support.pop_back();
    }
  };
  visit(visit, 0);

  PolytopeDescription out;
  out.optimal_operator = sol.scaled_operator;
  for (auto& [supp, vertex] : found) {
    out.supports.push_back(supp);
    out.vertices.push_back(std::move(vertex));
  }
  return out;
}

bool is_minimal_scaling(const FrameMatrix& frame, const Scaling& c) {
  const double kkt = kkt_residual(frame, c);
  if (kkt > 1e-6)
    throw PreconditionError("scaling is not Frobenius-optimal (stationarity violation " +
                            std::to_string(kkt) + ")");

  const auto supp = c.support();
  if (supp.empty()) return true;
  if (!outer_products_independent(frame, supp).independent) return false;

  // Independence already forces minimality; the sub-support solves guard the
  // borderline rank decisions.
  const Matrix lifted = lifted_outer_products(frame);
  const auto target = svec(frame_operator(frame, c).entries());
  for (std::size_t drop = 0; drop < supp.size(); ++drop) {
    std::vector<std::size_t> sub_support;
    for (std::size_t j = 0; j < supp.size(); ++j)
      if (j != drop) sub_support.push_back(supp[j]);
    if (sub_support.empty()) {
      if (norm2(target) <= kReconstructionTol) return false;
      continue;
    }
    const auto fit = nnls(columns_of(lifted, sub_support), target);
    if (fit.residual_norm <= kReconstructionTol) return false;
  }
  return true;
}

bool polytope_membership(const FrameMatrix& frame, const Scaling& c,
                         const PolytopeDescription& description) {
  if (c.size() != frame.count()) return false;
  const auto s = frame_operator(frame, c);
  if (s.order() != description.optimal_operator.order()) return false;
  return frobenius_norm(s.entries() - description.optimal_operator.entries()) <=
         kReconstructionTol;
}

}  // namespace framescale
