#include "treejudge/rng.hpp"

#include <stdexcept>

namespace treejudge {

uint64_t hash_seed(uint64_t base, std::string_view key) {
  uint64_t h = 0xcbf29ce484222325ull;  // FNV offset basis
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ull;  // FNV prime
  }
  return splitmix64(h ^ splitmix64(base));
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_index: empty range");
  }
  // Lemire's multiply-shift with rejection; unbiased and portable.
  uint64_t range = static_cast<uint64_t>(n);
  uint64_t x = next();
  __uint128_t m = static_cast<__uint128_t>(x) * range;
  uint64_t low = static_cast<uint64_t>(m);
  if (low < range) {
    uint64_t threshold = (0ull - range) % range;
    while (low < threshold) {
      x = next();
      m = static_cast<__uint128_t>(x) * range;
      low = static_cast<uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

}  // namespace treejudge
