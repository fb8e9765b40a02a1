#ifndef PARITYEST_RANDOM_HPP
#define PARITYEST_RANDOM_HPP

#include <cstdint>
#include <random>

namespace parityest {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `index` of a run, a pure function of (master, index) so
/// results do not depend on which worker handles which record.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, std::uint64_t index) {
  return Engine{derive_seed(master, index)};
}

/// Uniform on [0, 1) from the top 53 bits; unlike std::uniform_real_distribution
/// this is identical across standard library implementations.
inline double uniform01(Engine& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

} // namespace parityest

#endif
