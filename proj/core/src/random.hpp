#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace amuse::detail {

using Rng = std::mt19937_64;

/// Unbiased draw from [0, bound) by rejection; bound > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t bound) {
  const std::uint64_t range = bound;
  const std::uint64_t limit = Rng::max() - (Rng::max() % range + 1) % range;
  std::uint64_t draw = rng();
  while (draw > limit) draw = rng();
  return static_cast<std::size_t>(draw % range);
}

/// Mixes a base seed with a stream index so sub-tasks get independent streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Standard normal draws via Box-Muller on raw 53-bit uniforms; portable
/// across standard libraries, unlike std::normal_distribution.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  Rng& engine() { return rng_; }

 private:
  Rng rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace amuse::detail
