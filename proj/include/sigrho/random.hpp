#pragma once

// Reproducible random streams for the Monte-Carlo estimators.
//
// Algorithm: std::mt19937_64 (output sequence fixed by the C++ standard),
// seeded through std::seed_seq from (seed low word, seed high word, shard).
// Uniforms take the top 53 bits; normals use the Box-Muller transform.  No
// std::*_distribution is involved, so draws are identical on every platform.

#include <cmath>
#include <cstdint>
#include <future>
#include <numbers>
#include <random>
#include <vector>

namespace sigrho {

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t shard) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline constexpr std::uint64_t kMonteCarloShards = 16;

/// Splits `samples` into kMonteCarloShards contiguous shards, runs
/// `count_shard(stream, shard_samples)` for each on its own stream, and sums
/// the integer results.  The total depends only on (seed, samples).
template <class CountShard>
std::uint64_t sharded_count(std::uint64_t samples, std::uint64_t seed, CountShard count_shard) {
  std::vector<std::future<std::uint64_t>> parts;
  parts.reserve(kMonteCarloShards);
  for (std::uint64_t shard = 0; shard < kMonteCarloShards; ++shard) {
    const std::uint64_t begin = samples * shard / kMonteCarloShards;
    const std::uint64_t end = samples * (shard + 1) / kMonteCarloShards;
    parts.push_back(std::async(std::launch::async, [=, &count_shard] {
      RandomStream stream(seed, shard);
      return count_shard(stream, end - begin);
    }));
  }
  std::uint64_t total = 0;
  for (auto& p : parts) total += p.get();
  return total;
}

}  // namespace sigrho
