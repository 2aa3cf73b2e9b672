#include "skg/rng.hpp"

#include <cmath>
#include <numbers>

namespace skg {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t NoiseStream::bits(std::uint64_t counter) const {
  // splitmix64(key + c*golden) == draw #c of the sequence seeded with key.
  return splitmix64(key_ + counter * kGolden);
}

double NoiseStream::uniform01(std::uint64_t counter) const {
  // 53 mantissa bits, shifted into (0,1): never exactly 0 or 1.
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double NoiseStream::normal(std::uint64_t counter) const {
  const double u1 = uniform01(2 * counter);
  const double u2 = uniform01(2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_stream(std::uint64_t key, std::uint64_t tag) {
  return splitmix64(splitmix64(key) + tag);
}

std::uint64_t member_seed(std::uint64_t master, std::uint64_t index) {
  if (index == 0) return master;
  return splitmix64(master + index * kGolden);
}

}  // namespace skg
