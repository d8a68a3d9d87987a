#pragma once

#include <cstdint>
#include <random>

namespace ppart {

std::uint64_t splitmix64(std::uint64_t x);

// The single random source used everywhere in the library. Every consumer
// takes an Rng by reference or forks a named substream, so a run is fully
// determined by its root seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Independent substream keyed by `stream`; does not advance this generator.
  Rng fork(std::uint64_t stream) const { return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x9e37))); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace ppart
