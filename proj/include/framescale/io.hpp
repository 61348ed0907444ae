#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "framescale/frame.hpp"

namespace framescale {

enum class FrameFormat { kJson, kCsv };

/// On-disk frame document. JSON carries formatVersion "1", dim, count, the
/// columns as nested arrays, and a free-form string metadata map. CSV has a
/// header row v1,...,vM followed by N data rows (one frame vector per
/// column). Numbers serialize with 17 significant digits so parsing the
/// output reproduces the doubles exactly.
struct FrameDocument {
  std::string format_version = "1";
  std::size_t dim = 0;
  std::size_t count = 0;
  std::vector<std::vector<double>> columns;  // count entries of length dim
  std::map<std::string, std::string> metadata;

  FrameMatrix to_frame() const;
};

FrameDocument parse_frame_document(std::string_view bytes, FrameFormat format);
FrameMatrix parse_frame(std::string_view bytes, FrameFormat format);

std::string serialize_frame(const FrameMatrix& frame, FrameFormat format,
                            const std::map<std::string, std::string>& metadata = {});

/// Named fixture frames. Parameterized names take the form
/// "name(key=value,...)", e.g. "frob-singular(a=0.6,n=4)". Unknown names
/// raise a validation error listing everything available.
FrameMatrix builtin_frame(const std::string& name);
std::vector<std::string> builtin_frame_names();

/// Columns are independent standard-normal vectors normalized to unit
/// length, drawn from SeededRng (see rng.hpp for the pinned algorithm).
FrameMatrix random_unit_frame(std::size_t dim, std::size_t count, std::uint64_t seed);

/// Unit vectors clustered around e_1: e_1 itself, then e_1 + delta * e_k for
/// k = 2..dim, then e_1 + delta * (random unit vector), all renormalized.
FrameMatrix near_degenerate_frame(std::size_t dim, std::size_t count, double delta,
                                  std::uint64_t seed);

/// Appends `extra` positive multiples of randomly chosen existing columns.
/// The appended outer products lie in the cone of the originals, so the
/// optimal Frobenius residual is unchanged.
FrameMatrix extend_within_cone(const FrameMatrix& frame, std::size_t extra, std::uint64_t seed);

}  // namespace framescale
