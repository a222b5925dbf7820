#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace graphfsa {

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for the `index`-th item of `stream` under `seed`. Depends only on
/// its arguments, so items can be generated in any order or in parallel.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Deterministic generator. The distributions are implemented here rather
/// than taken from <random>, whose distribution algorithms are unspecified
/// and differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, bound). bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);
  /// Uniform on [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform on [0, 1).
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }
  double normal(double mean, double stddev);

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace graphfsa
