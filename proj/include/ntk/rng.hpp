#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace ntk {

// SplitMix64 stream: output i is mix(seed + (i+1)*golden). Bit-identical
// across platforms; normals come from our own polar method rather than
// std::normal_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (-1, 1).
  double symmetric_uniform();
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t z);

// Seed for an independent sub-stream keyed by (master, label, indices).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::initializer_list<std::uint64_t> indices = {});

}  // namespace ntk
