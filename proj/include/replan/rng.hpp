#pragma once

#include <cstdint>
#include <random>

namespace replan {

/// Deterministic random stream. Doubles are produced from raw 64-bit draws
/// so sequences are bit-stable across platforms and standard-library
/// versions; identical seeds give identical sequences.
///
/// Streams are single-owner. Independent substreams for separate concerns
/// (obstacle motion, planner sampling, ...) are derived from the
/// construction seed via substream(), so draw counts in one concern never
/// shift another.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_bits() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi). Degenerate lo == hi returns lo.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return n == 0 ? 0 : engine_() % n;
  }

  /// Stream derived from this stream's construction seed and a tag.
  /// Independent of how many draws have been taken from the parent.
  RandomStream substream(std::uint64_t tag) const {
    return RandomStream(mix(seed_ ^ (0x9E3779B97F4A7C15ull * (tag + 1))));
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace replan
