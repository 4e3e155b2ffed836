#pragma once

#include <cstdint>
#include <string_view>

// Deterministic seeded randomness.
//
// Everything in the simulator derives from a single user seed through keyed
// hashing, so substreams for (trial, node, round, ...) are independent of
// evaluation order and of each other.  The mixer is the splitmix64 finalizer,
// which is cheap enough to evaluate once per potential noise flip.

namespace beepsim {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Compile-time tag for naming substreams ("noise", "trial", ...).
constexpr std::uint64_t stream_tag(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ull;
  }
  return h;
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed + kGolden * mix64(v + kGolden));
}

template <typename... Rest>
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t v, Rest... rest) {
  return derive(derive(seed, v), rest...);
}

// Counter-mode generator: stateless apart from the counter, so a stream keyed
// by (seed, purpose, index...) always replays identically.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next() { return mix64(key_ + kGolden * ++counter_); }

  // Uniform on [0, n) without modulo bias (Lemire's method with rejection).
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      std::uint64_t threshold = -n % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double uniform01() { return (next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Threshold for "hash < threshold" Bernoulli(p) tests on 64-bit hashes.
inline std::uint64_t bernoulli_threshold(double p) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return ~0ull;
  long double scaled = static_cast<long double>(p) * 18446744073709551616.0L;
  if (scaled >= 18446744073709551615.0L) return ~0ull;
  return static_cast<std::uint64_t>(scaled);
}

}  // namespace beepsim
