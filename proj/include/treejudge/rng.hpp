#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace treejudge {

// SplitMix64 finalizer. Used for seed derivation and stream splitting so that
// related seeds (base, base+1, ...) do not produce correlated engines.
constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// FNV-1a over `key`, mixed with `base`. Task seeds are derived as
// hash_seed(base_seed, task_id) so parallel scheduling cannot change results.
uint64_t hash_seed(uint64_t base, std::string_view key);

/**
 * Seeded RNG with explicit, portable value mappings.
 *
 * std::mt19937_64's raw output sequence is pinned by the standard; the
 * std::uniform_* distributions are not. All mappings here are hand-rolled
 * from raw 64-bit draws, so a (seed, draw sequence) pair yields identical
 * values on every platform and standard library.
 */
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  uint64_t next() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  bool bernoulli(double p) { return uniform01() < p; }

  // Independent derived stream; does not advance this engine.
  Rng fork(uint64_t stream_tag) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream_tag)));
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace treejudge
