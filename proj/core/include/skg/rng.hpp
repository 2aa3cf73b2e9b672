#pragma once

#include <cstdint>

namespace skg {

// SplitMix64 output function: draw #0 of the sequence seeded with x.
std::uint64_t splitmix64(std::uint64_t x);

// Stateless counter-addressed random stream: bits(c) is draw #c of the
// SplitMix64 sequence seeded with `key`. Because draws are addressed rather
// than consumed, results do not depend on evaluation order — that is what
// makes traces bit-reproducible under threading and replay.
//
// Normals use the Box-Muller cosine branch (the "paired transform" option):
//   z(c) = sqrt(-2 ln u1) * cos(2 pi u2),  u1 = uniform01(2c), u2 = uniform01(2c+1).
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t key) : key_(key) {}

  std::uint64_t bits(std::uint64_t counter) const;
  double uniform01(std::uint64_t counter) const;  // strictly inside (0,1)
  double normal(std::uint64_t counter) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

// Decorrelated sub-stream key for a named purpose (initial data vs forcing).
std::uint64_t derive_stream(std::uint64_t key, std::uint64_t tag);

// Seed of ensemble member `index`. Member 0 keeps the master seed so a
// one-member ensemble reproduces a plain run bit for bit; members >= 1 take
// outputs of the SplitMix64 sequence rooted at the master seed.
std::uint64_t member_seed(std::uint64_t master, std::uint64_t index);

}  // namespace skg
