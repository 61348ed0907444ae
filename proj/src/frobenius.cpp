#include "framescale/frobenius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace framescale {

namespace {

Matrix columns_of(const Matrix& a, const std::vector<std::size_t>& cols) {
  Matrix sub(a.rows(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) sub(i, j) = a(i, cols[j]);
  return sub;
}

std::vector<double> residual_vector(const Matrix& a, const std::vector<double>& b,
                                    const std::vector<double>& x) {
  auto ax = matvec(a, x);
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] = b[i] - ax[i];
  return ax;
}

}  // namespace

NnlsResult nnls(const Matrix& a, const std::vector<double>& b, double dual_tol,
                const std::vector<std::size_t>& warm_support) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw DimensionError("nnls: rhs length differs from row count");

  std::vector<double> x(n, 0.0);
  std::vector<bool> passive(n, false);
  std::vector<std::size_t> passive_list;

  // Solve the least-squares subproblem restricted to the passive set and,
  // while any passive coefficient is nonpositive, step back toward the
  // previous iterate and demote the offenders.
  auto solve_passive = [&](std::vector<double>& z) -> bool {
    const Matrix sub = columns_of(a, passive_list);
    const auto qr = pivoted_qr(sub, kRankTol);
    if (qr.rank < passive_list.size()) return false;
    const auto zs = qr_solve(qr, b);
    z.assign(n, 0.0);
    for (std::size_t j = 0; j < passive_list.size(); ++j) z[passive_list[j]] = zs[j];
    return true;
  };

  auto inner_feasibility = [&](std::vector<double>& z) {
    while (true) {
      double alpha = 2.0;
      for (std::size_t idx : passive_list) {
        if (z[idx] <= 0.0) {
          const double t = x[idx] / (x[idx] - z[idx]);
          alpha = std::min(alpha, t);
        }
      }
      if (alpha > 1.0) break;  // all passive coefficients already feasible
      for (std::size_t idx : passive_list) x[idx] += alpha * (z[idx] - x[idx]);
      std::vector<std::size_t> kept;
      for (std::size_t idx : passive_list) {
        if (x[idx] <= 1e-14) {
          x[idx] = 0.0;
          passive[idx] = false;
        } else {
          kept.push_back(idx);
        }
      }
      passive_list = std::move(kept);
      if (passive_list.empty()) {
        z.assign(n, 0.0);
        break;
      }
      if (!solve_passive(z)) {
        // Numerically degenerate set; fall back to the current feasible x.
        z = x;
        break;
      }
    }
    for (std::size_t idx : passive_list) x[idx] = z[idx];
  };

  std::size_t iterations = 0;

  if (!warm_support.empty()) {
    for (std::size_t idx : warm_support) {
      if (idx >= n) throw ValidationError("nnls: warm support index out of range");
      if (!passive[idx]) {
        passive[idx] = true;
        passive_list.push_back(idx);
      }
    }
    // Drop the warm set down to independent columns, then make it feasible.
    const auto qr = pivoted_qr(columns_of(a, passive_list), kRankTol);
    std::vector<std::size_t> independent;
    for (std::size_t k = 0; k < qr.rank; ++k) independent.push_back(passive_list[qr.perm[k]]);
    std::sort(independent.begin(), independent.end());
    std::fill(passive.begin(), passive.end(), false);
    for (std::size_t idx : independent) passive[idx] = true;
    passive_list = std::move(independent);
    if (!passive_list.empty()) {
      std::vector<double> z;
      if (solve_passive(z)) {
        inner_feasibility(z);
      } else {
        std::fill(passive.begin(), passive.end(), false);
        passive_list.clear();
        std::fill(x.begin(), x.end(), 0.0);
      }
    }
  }

  const std::size_t max_outer = 30 * n + 30;
  std::set<std::size_t> banned;  // candidates rejected until the passive set changes

  while (iterations < max_outer) {
    ++iterations;
    const auto r = residual_vector(a, b, x);

    std::size_t best = n;
    double best_w = dual_tol;
    for (std::size_t j = 0; j < n; ++j) {
      if (passive[j] || banned.count(j)) continue;
      double w = 0.0;
      for (std::size_t i = 0; i < m; ++i) w += a(i, j) * r[i];
      if (w > best_w) {
        best_w = w;
        best = j;
      }
    }
    if (best == n) break;  // dual feasible: done

    passive[best] = true;
    passive_list.push_back(best);
    std::vector<double> z;
    if (!solve_passive(z) || z[best] <= 0.0) {
      passive[best] = false;
      passive_list.pop_back();
      banned.insert(best);
      continue;
    }
    banned.clear();
    inner_feasibility(z);
  }

  NnlsResult out;
  out.x = std::move(x);
  out.residual_norm = norm2(residual_vector(a, b, out.x));
  out.iterations = iterations;
  return out;
}

ScalingSolution minimize_frobenius(const FrameMatrix& frame) {
  const Matrix lifted = lifted_outer_products(frame);
  const auto target = svec(Matrix::identity(frame.dim()));
  const auto fit = nnls(lifted, target);

  ScalingSolution sol;
  sol.scaling = Scaling(fit.x);
  sol.scaled_operator = frame_operator(frame, sol.scaling);
  sol.norm_kind = NormKind::kFrobenius;
  sol.residual = frobenius_distance_to_identity(sol.scaled_operator);
  const auto eig = sym_eigen(sol.scaled_operator);
  sol.lambda_max = eig.eigenvalues.front();
  sol.lambda_min = std::max(eig.eigenvalues.back(), 0.0);
  sol.condition_number = (sol.lambda_min <= kSingularTol * sol.lambda_max || sol.lambda_max <= 0.0)
                             ? std::numeric_limits<double>::infinity()
                             : sol.lambda_max / sol.lambda_min;
  sol.iterations = fit.iterations;
  sol.converged = true;  // active-set NNLS terminates at the exact projection
  sol.kkt_residual = kkt_residual(frame, sol.scaling);
  return sol;
}

ProjectionResult unconstrained_projection(const FrameMatrix& frame) {
  const auto lift = gram_lift(frame);
  const auto eig = jacobi_eigen(lift.f);
  const double lmax = std::max(eig.eigenvalues.front(), 0.0);
  const double tol = kSingularTol * lmax;

  const std::size_t m = frame.count();
  ProjectionResult out;
  out.coefficients.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double lambda = eig.eigenvalues[k];
    if (lambda <= tol) continue;
    double proj = 0.0;
    for (std::size_t i = 0; i < m; ++i) proj += eig.eigenvectors(i, k) * lift.norms_squared[i];
    proj /= lambda;
    for (std::size_t i = 0; i < m; ++i) out.coefficients[i] += proj * eig.eigenvectors(i, k);
  }

  out.unique =
      outer_products_independent(frame, [&] {
        std::vector<std::size_t> all(m);
        for (std::size_t i = 0; i < m; ++i) all[i] = i;
        return all;
      }()).independent;

  out.residual = frobenius_distance_to_identity(
      SymmetricMatrix(weighted_frame_operator(frame, out.coefficients)));
  return out;
}

double kkt_residual(const FrameMatrix& frame, const Scaling& c) {
  if (c.size() != frame.count())
    throw DimensionError("kkt_residual: scaling length differs from the frame size");
  const auto lift = gram_lift(frame);
  const auto fc = matvec(lift.f, c.coefficients());
  double violation = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double slack = fc[i] - lift.norms_squared[i];
    if (c[i] > 0.0)
      violation = std::max(violation, std::abs(slack));
    else
      violation = std::max(violation, std::max(0.0, -slack));
  }
  return violation;
}

bool is_scalable(const FrameMatrix& frame, double tol) {
  return minimize_frobenius(frame).residual <= tol;
}

SpreadCertificate spread_certificate(const FrameMatrix& frame) {
  for (std::size_t j = 0; j < frame.count(); ++j) {
    if (std::abs(frame.column_norm(j) - 1.0) > 1e-10)
      throw PreconditionError("spread certificate needs a unit-norm frame; column " +
                              std::to_string(j + 1) + " has norm " +
                              std::to_string(frame.column_norm(j)));
  }

  const std::size_t m = frame.count();
  std::vector<std::size_t> all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = i;

  SpreadCertificate cert;
  cert.independent = outer_products_independent(frame, all).independent;

  const auto lift = gram_lift(frame);
  const auto [lo, hi] =
      std::minmax_element(lift.column_one_norms.begin(), lift.column_one_norms.end());
  cert.one_norm_spread = *hi - *lo;

  const auto eig = jacobi_eigen(lift.f);
  cert.smallest_singular_value = std::max(eig.eigenvalues.back(), 0.0);

  cert.holds = cert.independent && cert.one_norm_spread < cert.smallest_singular_value;
  if (cert.holds) {
    // F is positive definite here, so the plain eigen-solve of F a = g is exact.
    std::vector<double> a(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      double proj = 0.0;
      for (std::size_t i = 0; i < m; ++i) proj += eig.eigenvectors(i, k) * lift.norms_squared[i];
      proj /= eig.eigenvalues[k];
      for (std::size_t i = 0; i < m; ++i) a[i] += proj * eig.eigenvectors(i, k);
    }
    cert.positive_scaling = std::move(a);
  }
  return cert;
}

InvertibilityReport invertibility_report(const FrameMatrix& frame) {
  const auto sol = minimize_frobenius(frame);
  InvertibilityReport report;
  report.min_eigenvalue = sol.lambda_min;
  report.frobenius_operator_invertible = sol.lambda_min > 1e-8;
  report.support_size = sol.scaling.support().size();
  return report;
}

}  // namespace framescale
