#pragma once

#include <cstdint>
#include <span>

namespace garble {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream split: record i of a run seeded with `root` draws
// from an independent generator seeded with derive_stream_seed(root, i).
// Results therefore never depend on processing order or thread count.
constexpr std::uint64_t derive_stream_seed(std::uint64_t root, std::uint64_t index) {
  return mix64(mix64(root + kGoldenGamma * (index + 1)) + kGoldenGamma);
}

// xoshiro256++ (Blackman, Vigna), seeded through splitmix64. All draws are
// pure integer/IEEE-double arithmetic, so sequences are identical across
// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += kGoldenGamma;
      word = mix64(s);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  double uniform_real(double lo, double hi) { return lo + next_double() * (hi - lo); }

  // Uniform in [0, n). Lemire's multiply-shift; n must be > 0.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Index draw from unnormalized-by-rounding probabilities that sum to ~1.
  // Falls back to the last nonzero entry if rounding leaves a gap at the top.
  std::size_t categorical(std::span<const double> probs) {
    const double u = next_double();
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] > 0.0) last_nonzero = i;
      acc += probs[i];
      if (u < acc) return i;
    }
    return last_nonzero;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace garble
