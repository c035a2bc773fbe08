#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace racert {

// Counter-based pseudo-random generator.
//
// Output word i of a stream with key k is splitmix64_finalize(k + (i+1)*GOLDEN),
// where GOLDEN = 0x9E3779B97F4A7C15 and splitmix64_finalize is the finalizer of
// Steele, Lea & Flea's SplitMix64. Streams are cheap to fork by hashing the
// parent key with a stream id, so parallel trials and per-step draws can be
// reproduced independently of scheduling order.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  explicit CounterRng(std::uint64_t key = 0) : key_(key) {}

  // Forks a child stream; the parent is unaffected.
  CounterRng substream(std::uint64_t id) const {
    return CounterRng(mix(key_ ^ mix(id * kGolden + 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via Box-Muller (one value per call, no state cached).
  double gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace racert
