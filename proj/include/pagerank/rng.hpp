#pragma once

#include <cstdint>

#include "pagerank/errors.hpp"

namespace pagerank {

/// Counter-based generator in the splitmix64 family. A (seed, stream_id)
/// pair fully determines the sequence, so parallel trajectories get
/// decorrelated streams without any shared state. Integer path only;
/// identical output on every platform with 64-bit arithmetic.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : state_(derive(seed, stream_id)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) without modulo bias (rejection on the
  /// low 64-bit product word).
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw InvalidParams("next_below needs bound >= 1");
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) {
    // Hash the pair so that nearby seeds and nearby stream ids still start
    // far apart in state space.
    return mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^
               mix(stream_id + 0x6A09E667F3BCC909ULL));
  }

  std::uint64_t state_;
};

}  // namespace pagerank
