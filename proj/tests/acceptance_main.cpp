// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. An optional argv[1] substring filters which criteria run.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "framescale/frobenius.hpp"
#include "framescale/io.hpp"
#include "framescale/operator_scaling.hpp"
#include "framescale/polytope.hpp"
#include "framescale/rng.hpp"
#include "oracles.hpp"

using namespace framescale;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

bool check(bool condition, std::string& detail, const std::string& message) {
  if (!condition && detail.empty()) detail = message;
  return condition;
}

// 100 seeded spanning unit-norm frames with N in {2,3,4} and M <= 2N.
std::vector<FrameMatrix> ensemble() {
  std::vector<FrameMatrix> frames;
  for (int t = 0; frames.size() < 100; ++t) {
    const std::size_t n = 2 + t % 3;
    const std::size_t m = n + t % (n + 1);
    auto frame = random_unit_frame(n, m, 5000 + t);
    if (frame.spans()) frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  std::vector<Criterion> criteria;

  criteria.push_back({"01 operator solver reproduces the non-unique-optimum example", [](std::string& detail) {
    const auto sol = minimize_operator_norm(builtin_frame("example-op-nonunique"));
    const double spread = 2.0 * std::sqrt(2.0) / 3.0;
    bool ok = check(std::abs(sol.residual - spread) <= 1e-6, detail, "residual off");
    ok &= check(std::abs(sol.scaling[0] - 2.0 / 3.0) <= 1e-3, detail, "c1 off");
    ok &= check(std::abs(sol.scaling[1] - 2.0 / 3.0) <= 1e-3, detail, "c2 off");
    ok &= check(sol.scaling[2] >= 1.0 - spread - 1e-3 && sol.scaling[2] <= 1.0 + spread + 1e-3,
                detail, "c3 outside the optimal interval");
    return ok;
  }});

  criteria.push_back({"02 balance identity across the seeded ensemble", [](std::string& detail) {
    bool ok = true;
    for (const auto& frame : ensemble()) {
      const auto sol = minimize_operator_norm(frame);
      ok &= check(sol.converged, detail, "solver did not converge");
      ok &= check(std::abs(sol.lambda_max + sol.lambda_min - 2.0) <= 1e-5, detail,
                  "balance gap above 1e-5");
    }
    return ok;
  }});

  criteria.push_back({"03 condition dominance over random scalings and the unscaled operator", [](std::string& detail) {
    bool ok = true;
    int t = 0;
    for (const auto& frame : ensemble()) {
      const auto sol = minimize_operator_norm(frame);
      const double unscaled =
          condition_number(frame_operator(frame, Scaling::ones(frame.count())));
      ok &= check(sol.condition_number <= unscaled + 1e-6, detail,
                  "worse than the unscaled operator");
      SeededRng rng(9000 + t++);
      for (int r = 0; r < 100; ++r) {
        std::vector<double> c(frame.count());
        for (double& x : c) x = 2.0 * rng.uniform();
        const double cond = condition_number(frame_operator(frame, Scaling(c)));
        ok &= check(sol.condition_number <= cond + 1e-6, detail,
                    "a random scaling beat the solver");
      }
      if (!ok) break;
    }
    return ok;
  }});

  criteria.push_back({"04 residual bound and witness tightness", [](std::string& detail) {
    bool ok = true;
    for (const auto& frame : ensemble()) {
      const auto sol = minimize_operator_norm(frame);
      ok &= check(sol.residual < 1.0, detail, "spanning frame with residual >= 1");
    }
    const auto w1 = tightness_witness(2, 2, 0.05, 7);
    const double r1 = minimize_operator_norm(w1).residual;
    ok &= check(r1 >= 0.95 && r1 < 1.0, detail, "witness(2,2,0.05) missed its band");
    const auto w2 = tightness_witness(3, 5, 0.01, 7);
    const double r2 = minimize_operator_norm(w2).residual;
    ok &= check(r2 >= 0.99 && r2 < 1.0, detail, "witness(3,5,0.01) missed its band");
    return ok;
  }});

  criteria.push_back({"05 singular-family Frobenius solution", [](std::string& detail) {
    const auto sol = minimize_frobenius(builtin_frame("frob-singular(a=0.6,n=4)"));
    const double expected = 1.0 / 1.36;
    bool ok = check(std::abs(sol.scaling[0] - expected) <= 1e-6, detail, "c1 off");
    ok &= check(std::abs(sol.scaling[1] - expected) <= 1e-6, detail, "c2 off");
    ok &= check(std::abs(sol.scaling[2]) <= 1e-6 && std::abs(sol.scaling[3]) <= 1e-6, detail,
                "support not {1,2}");
    ok &= check(sol.lambda_min <= 1e-8, detail, "optimal operator not singular");
    ok &= check(std::abs(sol.residual * sol.residual - (4.0 - 2.0 / 1.36)) <= 1e-6, detail,
                "squared residual off");
    return ok;
  }});

  criteria.push_back({"06 active-set solutions match the projected-gradient oracle", [](std::string& detail) {
    bool ok = true;
    for (int t = 0; t < 30; ++t) {
      const std::size_t n = 2 + t % 2;
      const std::size_t m = 2 + t % 3;
      const auto frame = random_unit_frame(n, m, 300 + t);
      const auto sol = minimize_frobenius(frame);
      const double oracle = oracles::projected_gradient_residual(frame, 1000000);
      ok &= check(std::abs(sol.residual - oracle) <= 1e-4, detail, "oracle mismatch");
      ok &= check(sol.kkt_residual <= 1e-8, detail, "stationarity violated");
    }
    return ok;
  }});

  criteria.push_back({"07 planar Frobenius operators are invertible", [](std::string& detail) {
    bool ok = true;
    int spanning = 0;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t m = 2 + t % 5;
      const auto frame = random_unit_frame(2, m, 20000 + t);
      if (!frame.spans()) continue;
      ++spanning;
      const auto sol = minimize_frobenius(frame);
      ok &= check(sol.lambda_min > 1e-8, detail, "singular optimal operator in the plane");
      ok &= check(sol.residual < 1.0, detail, "planar residual reached 1");
    }
    ok &= check(spanning >= 990, detail, "ensemble unexpectedly degenerate");
    return ok;
  }});

  criteria.push_back({"08 spread certificate on orthonormal bases and perturbations", [](std::string& detail) {
    auto cert = spread_certificate(builtin_frame("onb3"));
    bool ok = check(cert.holds && cert.one_norm_spread == 0.0, detail, "basis certificate");
    ok &= check(std::abs(cert.smallest_singular_value - 1.0) <= 1e-12, detail,
                "basis smallest singular value");
    if (cert.positive_scaling)
      for (double a : *cert.positive_scaling)
        ok &= check(std::abs(a - 1.0) <= 1e-10, detail, "basis scaling");

    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 2 + t % 3;
      SeededRng rng(31000 + t);
      std::vector<std::vector<double>> cols;
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> col(n, 0.0);
        col[j] = 1.0;
        for (double& x : col) x += 0.02 * rng.normal();
        const double nc = norm2(col);
        for (double& x : col) x /= nc;
        cols.push_back(col);
      }
      cert = spread_certificate(FrameMatrix::from_columns(cols));
      ok &= check(cert.holds, detail, "perturbed certificate failed");
      if (cert.holds)
        for (double a : *cert.positive_scaling)
          ok &= check(a > 0.0, detail, "certificate held but scaling not positive");
    }
    return ok;
  }});

  criteria.push_back({"09 polytope vertices of the repeated-vector frame", [](std::string& detail) {
    const auto frame = builtin_frame("e1e2e1");
    const auto description = enumerate_minimal_scalings(frame);
    bool ok = check(description.vertices.size() == 2, detail, "vertex count");
    if (!ok) return ok;
    ok &= check(description.supports[0] == std::vector<std::size_t>{0, 1} &&
                    description.supports[1] == std::vector<std::size_t>{1, 2},
                detail, "supports");
    ok &= check(description.supports[0] != description.supports[1], detail,
                "supports not distinct");
    for (std::size_t k = 0; k < 2; ++k)
      ok &= check(outer_products_independent(frame, description.supports[k]).independent,
                  detail, "vertex outer products dependent");

    const double base =
        frobenius_distance_to_identity(description.optimal_operator);
    SeededRng rng(12345);
    for (int r = 0; r < 100; ++r) {
      const double t = rng.uniform();
      std::vector<double> mix(3);
      for (std::size_t i = 0; i < 3; ++i)
        mix[i] = t * description.vertices[0][i] + (1.0 - t) * description.vertices[1][i];
      ok &= check(polytope_membership(frame, Scaling(mix), description), detail,
                  "combination left the polytope");
      const double res = frobenius_distance_to_identity(frame_operator(frame, Scaling(mix)));
      ok &= check(std::abs(res - base) <= 1e-8, detail, "combination changed the residual");
    }
    return ok;
  }});

  criteria.push_back({"10 bounded scalars at unit-norm operator optima", [](std::string& detail) {
    bool ok = true;
    for (const auto& frame : ensemble()) {
      const auto sol = minimize_operator_norm(frame);
      double sum = 0.0;
      for (double c : sol.scaling.coefficients()) sum += c;
      ok &= check(sum <= 2.0 * static_cast<double>(frame.dim()) + 1e-6, detail,
                  "scalar sum exceeded twice the dimension");
    }
    return ok;
  }});

  criteria.push_back({"11 scalability detection", [](std::string& detail) {
    bool ok = check(minimize_frobenius(builtin_frame("mercedes")).residual <= 1e-8, detail,
                    "mercedes not scalable");
    ok &= check(minimize_frobenius(builtin_frame("onb3")).residual <= 1e-8, detail,
                "basis not scalable");
    ok &= check(is_scalable(builtin_frame("mercedes")) && is_scalable(builtin_frame("onb3")),
                detail, "scalable flags");
    const auto two = builtin_frame("nonscalable2");
    ok &= check(!is_scalable(two), detail, "two-vector frame misreported as scalable");
    const double grid = oracles::grid_search_residual(two);
    ok &= check(std::abs(minimize_frobenius(two).residual - grid) <= 1e-4, detail,
                "grid search disagrees with the reported residual");
    return ok;
  }});

  criteria.push_back({"12 recorded projection fixture is self-consistent", [](std::string& detail) {
    std::ifstream in(std::string(FRAMESCALE_TEST_DIR) + "/fixtures/projection_example.json");
    if (!in) {
      detail = "fixture file missing";
      return false;
    }
    nlohmann::json fixture;
    in >> fixture;

    const auto frame = builtin_frame("projection-example");
    const auto proj = unconstrained_projection(frame);
    const auto lift = gram_lift(frame);

    // solve self-consistency: F c = g to 1e-10
    const auto fc = matvec(lift.f, proj.coefficients);
    bool ok = true;
    for (std::size_t i = 0; i < fc.size(); ++i)
      ok &= check(std::abs(fc[i] - lift.norms_squared[i]) <= 1e-10, detail,
                  "F c = g violated");

    // the fixture records the computed solve
    const auto recorded = fixture["computedCoefficients"].get<std::vector<double>>();
    for (std::size_t i = 0; i < recorded.size(); ++i)
      ok &= check(std::abs(recorded[i] - proj.coefficients[i]) <= 1e-12, detail,
                  "fixture out of date");

    // and documents whether it matches the reference value
    const auto reference = fixture["referenceCoefficients"].get<std::vector<double>>();
    bool agrees = true;
    for (std::size_t i = 0; i < reference.size(); ++i)
      agrees = agrees && std::abs(reference[i] - proj.coefficients[i]) <= 1e-9;
    ok &= check(fixture["agreesWithReference"].get<bool>() == agrees, detail,
                "fixture documents the wrong agreement state");
    return ok;
  }});

  int failures = 0;
  for (auto& criterion : criteria) {
    if (!filter.empty() && criterion.name.find(filter) == std::string::npos) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    if (ok) {
      std::printf("PASS  %s\n", criterion.name.c_str());
    } else {
      ++failures;
      std::printf("FAIL  %s%s%s\n", criterion.name.c_str(), detail.empty() ? "" : " — ",
                  detail.c_str());
    }
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
