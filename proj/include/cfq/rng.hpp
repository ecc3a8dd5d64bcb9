#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace cfq::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t tag_hash(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

using Engine = std::mt19937_64;

/// Independent stream for one unit of work, keyed by (seed, tag, index).
/// Results never depend on which thread consumes the stream.
inline Engine stream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ tag_hash(tag));
  s = splitmix64(s ^ index);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return Engine(seq);
}

/// Uniform on (0, 1], built from the top 53 bits.
inline double uniform_open0(Engine& g) {
  return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
}

/// Exp(1) variate.
inline double exponential(Engine& g) { return -std::log(uniform_open0(g)); }

}  // namespace cfq::rng
