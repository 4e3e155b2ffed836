#include "beepsim/bitstring.hpp"

#include <bit>
#include <stdexcept>

#include "beepsim/rng.hpp"

namespace beepsim::codes {

namespace {
void require_same_length(const BitString& a, const BitString& b) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("bitstring length mismatch: " + std::to_string(a.length()) +
                                " vs " + std::to_string(b.length()));
  }
}
}  // namespace

BitString BitString::from_string(std::string_view bits) {
  BitString s(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      s.set_bit(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bitstring literal may only contain 0/1");
    }
  }
  return s;
}

BitString BitString::from_u64(std::uint64_t value, std::size_t length) {
  if (length < 64 && (value >> length) != 0) {
    throw std::invalid_argument("value does not fit in requested bit length");
  }
  BitString s(length);
  if (length > 0) {
    s.words_[0] = length >= 64 ? value : (value & ((1ull << length) - 1));
  }
  return s;
}

bool BitString::bit(std::size_t pos) const {
  if (pos >= len_) throw std::out_of_range("bit position out of range");
  return (words_[pos >> 6] >> (pos & 63)) & 1u;
}

void BitString::set_bit(std::size_t pos, bool value) {
  if (pos >= len_) throw std::out_of_range("bit position out of range");
  std::uint64_t mask = 1ull << (pos & 63);
  if (value) {
    words_[pos >> 6] |= mask;
  } else {
    words_[pos >> 6] &= ~mask;
  }
}

std::size_t BitString::weight() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

void BitString::or_with(const BitString& other) {
  require_same_length(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
}

void BitString::and_with(const BitString& other) {
  require_same_length(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
}

void BitString::xor_with(const BitString& other) {
  require_same_length(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
}

void BitString::flip_all() {
  for (auto& w : words_) w = ~w;
  clear_tail();
}

void BitString::clear_tail() {
  std::size_t tail = len_ & 63;
  if (tail != 0 && !words_.empty()) {
    words_.back() &= (1ull << tail) - 1;
  }
}

std::string BitString::to_string() const {
  std::string out(len_, '0');
  for (std::size_t i = 0; i < len_; ++i) {
    if (bit(i)) out[i] = '1';
  }
  return out;
}

std::uint64_t BitString::to_u64() const {
  if (len_ > 64) throw std::invalid_argument("bitstring longer than 64 bits");
  return words_.empty() ? 0 : words_[0];
}

std::strong_ordering BitString::operator<=>(const BitString& other) const {
  if (len_ != other.len_) return len_ <=> other.len_;
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i] != other.words_[i]) return words_[i] <=> other.words_[i];
  }
  return std::strong_ordering::equal;
}

std::size_t intersect_count(const BitString& a, const BitString& b) {
  require_same_length(a, b);
  std::size_t total = 0;
  auto wa = a.words(), wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) total += std::popcount(wa[i] & wb[i]);
  return total;
}

bool intersects(const BitString& a, const BitString& b, double d) {
  return static_cast<double>(intersect_count(a, b)) >= d;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  require_same_length(a, b);
  std::size_t total = 0;
  auto wa = a.words(), wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) total += std::popcount(wa[i] ^ wb[i]);
  return total;
}

BitString bit_not(const BitString& s) {
  BitString out = s;
  out.flip_all();
  return out;
}

BitString superimpose(std::span<const BitString> set, std::size_t length) {
  BitString out(length);
  for (const BitString& s : set) out.or_with(s);
  return out;
}

std::optional<std::size_t> ones_position(const BitString& s, std::size_t i) {
  if (i == 0) throw std::invalid_argument("ones_position index is 1-based");
  std::size_t seen = 0;
  auto words = s.words();
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    std::uint64_t w = words[wi];
    std::size_t count = std::popcount(w);
    if (seen + count < i) {
      seen += count;
      continue;
    }
    while (w != 0) {
      std::size_t bitpos = std::countr_zero(w);
      if (++seen == i) return wi * 64 + bitpos;
      w &= w - 1;
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> one_positions(const BitString& s) {
  std::vector<std::size_t> out;
  out.reserve(s.weight());
  auto words = s.words();
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    std::uint64_t w = words[wi];
    while (w != 0) {
      out.push_back(wi * 64 + std::countr_zero(w));
      w &= w - 1;
    }
  }
  return out;
}

std::uint64_t read_field(const BitString& s, std::size_t offset, std::size_t width) {
  if (width > 64 || offset + width > s.length()) {
    throw std::invalid_argument("field does not fit in bitstring");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < width; ++i) {
    if (s.bit(offset + i)) value |= 1ull << i;
  }
  return value;
}

void write_field(BitString& s, std::size_t offset, std::size_t width, std::uint64_t value) {
  if (width > 64 || offset + width > s.length()) {
    throw std::invalid_argument("field does not fit in bitstring");
  }
  if (width < 64 && (value >> width) != 0) {
    throw std::invalid_argument("field value does not fit in width");
  }
  for (std::size_t i = 0; i < width; ++i) {
    s.set_bit(offset + i, (value >> i) & 1u);
  }
}

BitString random_bits(std::size_t length, std::uint64_t key) {
  BitString out(length);
  CounterRng rng(key);
  auto words = out.words();
  for (auto& w : words) w = rng.next();
  // Mask the final partial word so equality and weight stay well defined.
  std::size_t tail = length & 63;
  if (tail != 0 && !words.empty()) words.back() &= (1ull << tail) - 1;
  return out;
}

}  // namespace beepsim::codes
