// Deterministic splittable random streams.
//
// RandomStream is a value type around the SplitMix64 sequence. Two rules make
// parallel simulation bit-reproducible:
//   * next_*() advances this stream and no other.
//   * derive(index) returns an independent child stream keyed on
//     (current state, index) without advancing the parent, so work items
//     addressed by the same index chain see the same draws regardless of
//     thread schedule.
//
// Derivation rule: child state = mix(state ^ STREAM_SALT ^ mix(index + INDEX_SALT)),
// where mix is the SplitMix64 finalizer. The salts keep derived states
// disjoint from the parent's own output sequence.

#pragma once

#include <cmath>
#include <cstdint>

namespace hicrit {

class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  // Next raw 64-bit word (one SplitMix64 step).
  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform in [0, 1), 53 mantissa bits. Never returns 1.0.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; consumes exactly two words.
  double next_normal() {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Independent child stream; the parent is not advanced.
  RandomStream derive(std::uint64_t index) const {
    return RandomStream(mix(state_ ^ kStreamSalt ^ mix(index + kIndexSalt)));
  }

  std::uint64_t state() const { return state_; }

 private:
  static constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;
  static constexpr std::uint64_t kIndexSalt = 0x8E9D5AAF38C54F1Dull;

  static constexpr std::uint64_t mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::uint64_t state_ = 0;
};

}  // namespace hicrit
