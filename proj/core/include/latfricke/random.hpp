#pragma once

#include <cstdint>
#include <random>

namespace latfricke {

// mt19937_64 with a portable bounded draw, so that sample sequences do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }
  // Uniform integer in [lo, hi].
  long uniform(long lo, long hi);
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 gen_;
};

// Seed for the index-th stream of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace latfricke
