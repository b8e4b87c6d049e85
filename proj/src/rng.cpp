#include "esurf/rng.hpp"

namespace esurf {

std::uint64_t Rng::next_below(std::uint64_t n) {
  // 2^64 mod n values at the bottom of the range would bias the modulo,
  // so reject them (arc4random_uniform style).
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

}  // namespace esurf
