#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace una {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: output k of a stream is a bijective mix of
/// (key + k * golden_gamma). Streams are derived by hashing a parent key with
/// a label, so any (seed, batch, slot) triple addresses its own sequence
/// without touching shared state.
///
/// All distributions are implemented here instead of through <random> so the
/// produced values are identical across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(splitmix64_mix(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    return splitmix64_mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
  }

  /// Child stream; independent of how far this stream has been consumed.
  constexpr CounterRng split(std::uint64_t label) const noexcept {
    return CounterRng(key_ ^ splitmix64_mix(label + 0x632BE59BD9B4E019ULL));
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    // Reject the low residue class so every value is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x >= threshold) return x % bound;
    }
  }

  bool bernoulli(double p) noexcept { return p >= 1.0 || uniform() < p; }

  /// Standard normal via Box-Muller (cosine branch only).
  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream for one sentence slot of one training batch.
inline CounterRng sentence_stream(std::uint64_t seed, std::uint64_t batch_index,
                                  std::uint64_t position) noexcept {
  return CounterRng(seed).split(batch_index).split(position);
}

}  // namespace una
