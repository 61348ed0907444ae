#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "framescale/frobenius.hpp"
#include "framescale/operator_scaling.hpp"
#include "framescale/polytope.hpp"

namespace framescale {

using OrderedJson = nlohmann::ordered_json;

/// Infinite values serialize as the string "inf" (JSON has no infinity).
OrderedJson json_number(double v);

OrderedJson to_json(const Matrix& m);
OrderedJson to_json(const ScalingSolution& sol);
OrderedJson to_json(const SpreadCertificate& cert);
OrderedJson to_json(const InvertibilityReport& report);
OrderedJson to_json(const PolytopeDescription& description);

std::string norm_kind_name(NormKind kind);

/// FNV-1a 64-bit digest, hex encoded; used to fingerprint CLI inputs.
std::string fnv1a_digest(std::string_view bytes);

}  // namespace framescale
