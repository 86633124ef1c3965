#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace projsplit {

/// Counter-based pseudo-random stream built on the SplitMix64 finalizer.
///
/// Output i of a stream with key k is mix64(k + (i+1)*GAMMA), so a stream is
/// a pure function of (key, counter) and independent streams are derived by
/// re-keying rather than by jumping ahead. Every experiment and every noise
/// sequence owns its own child stream, which makes whole runs reproducible
/// from a single 64-bit seed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  static RngStream root(std::uint64_t seed) { return RngStream(mix64(seed ^ kRootSalt)); }

  /// Derive an independent stream; `tag` names the purpose (0, 1, 2, ...).
  [[nodiscard]] RngStream child(std::uint64_t tag) const {
    return RngStream(mix64(key_ ^ mix64(tag + kChildSalt)));
  }

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

  /// Uniform double in [0, 1), 53 random bits.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; always consumes exactly two draws.
  double next_normal() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kRootSalt = 0x8096B0A5E1F9D243ULL;
  static constexpr std::uint64_t kChildSalt = 0xD6E8FEB86659FD93ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace projsplit
