#ifndef RLM_UTIL_RNG_HPP_
#define RLM_UTIL_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace rlm {

// FNV-1a, 64-bit. Used for stable content hashes and rng substream keys.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent substream for (seed, index); order of use does not matter.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

inline std::mt19937_64 substream(std::uint64_t seed, std::string_view tag) {
  return substream(seed, fnv1a64(tag));
}

}  // namespace rlm

#endif  // RLM_UTIL_RNG_HPP_
