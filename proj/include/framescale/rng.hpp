#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

namespace framescale {

/// Deterministic scalar source used by every generator in the library.
///
/// The algorithm is fully pinned so fixtures reproduce across platforms and
/// ports: the engine is std::mt19937_64 seeded directly with the given
/// value, uniforms are (x >> 11) * 2^-53 in [0, 1), and standard normals
/// come from the Box-Muller transform on consecutive uniform pairs
/// (the cosine branch first, the sine branch cached for the next call).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (cached_) {
      const double v = *cached_;
      cached_.reset();
      return v;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

  /// Integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const auto v = static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
    return v >= bound ? bound - 1 : v;
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_;
};

}  // namespace framescale
