#include "sabc/random.hpp"

namespace sabc {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, Stage stage, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stage));
  return splitmix64(h ^ splitmix64(index));
}

Rng make_rng(std::uint64_t seed, Stage stage, std::uint64_t index) {
  return Rng(derive_seed(seed, stage, index));
}

double uniform_open(Rng& rng) {
  // 53 random bits, offset by half a unit so 0 and 1 are unreachable.
  const auto bits = rng() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace sabc
