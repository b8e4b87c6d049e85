#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace esurf {

/// SplitMix64 stream. Produces the same sequence on every platform, which is
/// what makes seeded runs byte-reproducible; do not swap in std::mt19937 +
/// std::uniform_int_distribution (the distribution is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform draw from [0, n); n must be positive. Rejection sampling keeps
  /// the distribution exactly uniform.
  std::uint64_t next_below(std::uint64_t n);

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[next_below(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace esurf
