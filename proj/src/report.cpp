#include "framescale/report.hpp"

#include <cmath>
#include <cstdio>

namespace framescale {

OrderedJson json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

OrderedJson to_json(const Matrix& m) {
  OrderedJson rows = OrderedJson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

OrderedJson to_json(const ScalingSolution& sol) {
  OrderedJson j;
  j["normKind"] = norm_kind_name(sol.norm_kind);
  j["scaling"] = sol.scaling.coefficients();
  j["operator"] = to_json(sol.scaled_operator.entries());
  j["residual"] = sol.residual;
  j["lambdaMax"] = sol.lambda_max;
  j["lambdaMin"] = sol.lambda_min;
  j["conditionNumber"] = json_number(sol.condition_number);
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  j["kktResidual"] = sol.kkt_residual;
  return j;
}

OrderedJson to_json(const SpreadCertificate& cert) {
  OrderedJson j;
  j["oneNormSpread"] = cert.one_norm_spread;
  j["smallestSingularValue"] = cert.smallest_singular_value;
  j["independent"] = cert.independent;
  j["holds"] = cert.holds;
  if (cert.positive_scaling)
    j["positiveScaling"] = *cert.positive_scaling;
  else
    j["positiveScaling"] = nullptr;
  return j;
}

OrderedJson to_json(const InvertibilityReport& report) {
  OrderedJson j;
  j["frobeniusOperatorInvertible"] = report.frobenius_operator_invertible;
  j["minEigenvalue"] = report.min_eigenvalue;
  j["supportSize"] = report.support_size;
  return j;
}

OrderedJson to_json(const PolytopeDescription& description) {
  OrderedJson j;
  j["optimalOperator"] = to_json(description.optimal_operator.entries());
  OrderedJson vertices = OrderedJson::array();
  for (const auto& v : description.vertices) vertices.push_back(v.coefficients());
  j["vertices"] = std::move(vertices);
  j["supports"] = description.supports;
  return j;
}

std::string norm_kind_name(NormKind kind) {
  return kind == NormKind::kOperator ? "operator" : "frobenius";
}

std::string fnv1a_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace framescale
