#pragma once

#include <cstdint>

namespace ctcog {

// SplitMix64: a counter-based generator (Steele/Lea/Flood mixing constants).
// Output k is a pure function of (state0, k), so independently derived streams
// are reproducible bit-for-bit on every platform; no libc distribution objects
// are involved anywhere in the simulator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits; exact division by 2^53.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream for (seed, purpose, index). Subject i always
// gets the same stream no matter how work is split across threads, which is
// what makes parallel runs byte-identical to serial ones.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  std::uint64_t s = SplitMix64::mix(seed + 0x9e3779b97f4a7c15ull);
  s = SplitMix64::mix(s ^ (purpose * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull));
  s = SplitMix64::mix(s ^ (index * 0x2545f4914f6cdd1dull + 0x9e3779b97f4a7c15ull));
  return SplitMix64(s);
}

}  // namespace ctcog
