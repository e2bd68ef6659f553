#pragma once

#include <cstdint>
#include <string_view>

namespace causim {

// splitmix64: the pinned PRNG for exogenous sampling and growth decisions.
// Seeds are meaningful across platforms, so nothing here may depend on
// std::random or locale state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased-enough draw for small n (n is tiny everywhere this is used).
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

 private:
  std::uint64_t state_;
};

// Derives a child seed from (seed, salt); used for per-attempt and
// per-task RNG streams so parallel generation stays reproducible.
inline std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t salt) {
  SplitMix64 s(seed);
  std::uint64_t a = s.next();
  SplitMix64 t(a ^ (salt + 0x9E3779B97F4A7C15ULL));
  return t.next();
}

// FNV-1a, for deriving stream seeds from string ids.
inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace causim
