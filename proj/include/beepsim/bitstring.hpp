#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Fixed-length bit strings, packed 64 bits per word.  These are the currency
// of the whole simulator: codewords, beep schedules, received transcripts and
// message payloads are all BitStrings.
//
// Position 0 is the first transmitted bit.  Internally bit i lives in word
// i/64 at bit i%64 (LSB first), which makes from_u64/to_u64 the natural
// little-endian value mapping and keeps popcount loops simple.

namespace beepsim::codes {

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length) : len_(length), words_(word_count(length), 0) {}

  static BitString from_string(std::string_view bits);
  // Low `length` bits of `value`, bit 0 of the value at position 0.
  static BitString from_u64(std::uint64_t value, std::size_t length);

  std::size_t length() const { return len_; }
  bool empty() const { return len_ == 0; }

  bool bit(std::size_t pos) const;
  void set_bit(std::size_t pos, bool value);

  std::size_t weight() const;

  // In-place word-parallel operations (lengths must match).
  void or_with(const BitString& other);
  void and_with(const BitString& other);
  void xor_with(const BitString& other);
  void flip_all();

  std::string to_string() const;
  std::uint64_t to_u64() const;  // requires length() <= 64

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool operator==(const BitString& other) const = default;
  // Numeric order (value as a little-endian integer), shorter-length first.
  // Used for deterministic tie-breaking and ordered containers.
  std::strong_ordering operator<=>(const BitString& other) const;

  static std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

 private:
  void clear_tail();

  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

// Number of positions where both strings carry a 1, i.e. 1(s AND s').
std::size_t intersect_count(const BitString& a, const BitString& b);

// Whether `a` d-intersects `b`: 1(a AND b) >= d.
bool intersects(const BitString& a, const BitString& b, double d);

std::size_t hamming_distance(const BitString& a, const BitString& b);

BitString bit_not(const BitString& s);

// OR of a set of equal-length strings; `length` disambiguates the empty set.
BitString superimpose(std::span<const BitString> set, std::size_t length);

// Position of the i-th 1 (i is 1-based); nullopt when weight(s) < i.
std::optional<std::size_t> ones_position(const BitString& s, std::size_t i);

std::vector<std::size_t> one_positions(const BitString& s);

// Uniformly random string of `length` bits, drawn from the stream keyed by
// `key` (see rng.hpp).
BitString random_bits(std::size_t length, std::uint64_t key);

// Fixed-width integer fields inside a bit string (width <= 64), used by the
// protocol wire formats.  Field bit 0 maps to string position `offset`.
std::uint64_t read_field(const BitString& s, std::size_t offset, std::size_t width);
void write_field(BitString& s, std::size_t offset, std::size_t width, std::uint64_t value);

}  // namespace beepsim::codes

namespace beepsim {
using codes::BitString;
}
