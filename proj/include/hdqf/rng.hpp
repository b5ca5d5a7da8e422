#pragma once

// Counter-based, splittable random stream.
//
// Every draw is a pure function of (key, counter): the key is derived from a
// user seed plus a stream id, and the counter advances by one per draw. A
// child stream is obtained with split(id) and never overlaps its parent in
// practice, so independent trials can each own a stream and still replay
// bit-exactly regardless of the order in which they are scheduled.

#include <cstdint>
#include <limits>

namespace hdqf {

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  /// Independent child stream; does not advance this stream.
  [[nodiscard]] constexpr CounterRng split(std::uint64_t stream_id) const noexcept {
    CounterRng child(0);
    child.key_ = mix64(key_ ^ mix64(stream_id * kGolden + 0x9e3779b97f4a7c15ULL));
    return child;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    // Lemire's nearly-divisionless rejection.
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Fair bipolar draw: +1 or -1.
  constexpr int bipolar() noexcept { return ((*this)() >> 63) ? -1 : 1; }

  [[nodiscard]] constexpr std::uint64_t draws() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hdqf
