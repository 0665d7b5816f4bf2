#pragma once

#include <cstdint>
#include <random>

namespace conehull {

// splitmix64 step; used to derive independent, reproducible streams from
// (seed, stream-id) pairs so concurrent sub-problems never share RNG state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t salt = 0) {
  return splitmix64(splitmix64(seed ^ 0x6a09e667f3bcc909ULL) + splitmix64(stream) +
                    salt * 0x9e3779b97f4a7c15ULL);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0,
                                std::uint64_t salt = 0) {
  return std::mt19937_64(mix_seed(seed, stream, salt));
}

}  // namespace conehull
