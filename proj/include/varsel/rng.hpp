#pragma once

#include <cstdint>
#include <random>

namespace varsel {

/// Portable random source.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the C++ standard,
/// and implements the uniform, normal and bounded-integer transforms locally
/// (the standard library distributions are implementation-defined). A given
/// seed therefore yields the same stream on every platform and toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal draw (Box-Muller, pairs cached).
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 mixing of (base, stream); used to derive independent per-replicate seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace varsel
