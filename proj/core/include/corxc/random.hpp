#pragma once

#include <cstdint>
#include <random>

namespace corxc {

/// Seeded generator with a fully specified output sequence.
///
/// The engine is std::mt19937_64 (its output is fixed by the standard) and
/// bounded integers are drawn by rejection sampling on the raw 64-bit words,
/// so a seed reproduces the same stream on every platform and in any other
/// implementation following the same recipe. std::uniform_int_distribution
/// is not used because its algorithm is implementation-defined.
class PortableRandom {
 public:
  explicit PortableRandom(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// True with probability num/den.
  bool bernoulli(std::uint64_t num, std::uint64_t den);

 private:
  std::mt19937_64 engine_;
};

}  // namespace corxc
