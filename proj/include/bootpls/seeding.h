#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bootpls {

/// Stream tags used in seed derivation. Every random draw in the library comes
/// from an engine seeded by derive_seed(root, {stream, index...}), so any
/// sub-result can be regenerated from the root seed alone.
enum class Stream : std::uint64_t {
  Outer = 1,
  Inner = 2,
  Jackknife = 3,
  Original = 4,
  Final = 5,
  Folds = 6,
  Eta = 7,
  Trial = 8,
  Data = 9,
  Noise = 10,
  Test = 11,
  Method = 12,
  CvRepeat = 13,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based derivation: folds each path element into the root with
/// splitmix64. Order matters; (a, b) and (b, a) give unrelated seeds.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(root);
  for (std::uint64_t v : path) s = splitmix64(s ^ splitmix64(v + 0x632BE59BD9B4E019ULL));
  return s;
}

inline std::uint64_t derive_seed(std::uint64_t root, Stream stream, std::uint64_t index = 0) {
  return derive_seed(root, {static_cast<std::uint64_t>(stream), index});
}

using Rng = std::mt19937_64;

}  // namespace bootpls
