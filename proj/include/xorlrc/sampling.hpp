#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace xorlrc {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the stream for (seed, key) depends on nothing
/// else, so trial i draws the same values whichever worker runs it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t key) noexcept : base_(mix64(seed ^ mix64(key))) {}

  std::uint64_t next() noexcept { return mix64(base_ + 0x632be59bd9b4e019ULL * ++counter_); }

  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  /// Uniform in [0, 1).
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

/// Uniform `count`-subset of {0..n-1}, sorted (Floyd's algorithm).
std::vector<std::size_t> sample_subset(CounterRng& rng, std::size_t n, std::size_t count);

}  // namespace xorlrc
