#include "ardtk/bitword.hpp"

#include <algorithm>
#include <bit>

#include "ardtk/error.hpp"

namespace ardtk {

namespace {

std::size_t byte_count(std::size_t n) { return (n + 7) / 8; }

}  // namespace

BitWord::BitWord(std::size_t n, bool fill)
    : bytes_(byte_count(n), fill ? 0xFF : 0x00), size_(n) {
  if (fill && (n & 7)) {
    bytes_.back() = static_cast<std::uint8_t>(0xFF00u >> (n & 7));
  }
}

BitWord BitWord::from_string(std::string_view bits) {
  BitWord w(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      w.set(i, true);
    } else if (bits[i] != '0') {
      fail(ErrorKind::Usage, "bit string contains a character other than 0/1");
    }
  }
  return w;
}

BitWord BitWord::from_bytes(std::span<const std::uint8_t> bytes, std::size_t n) {
  if (bytes.size() < byte_count(n)) {
    fail(ErrorKind::Range, "not enough bytes for requested bit length");
  }
  BitWord w;
  w.size_ = n;
  w.bytes_.assign(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(byte_count(n)));
  if (n & 7) {
    w.bytes_.back() &= static_cast<std::uint8_t>(0xFF00u >> (n & 7));
  }
  return w;
}

BitWord BitWord::from_uint(std::uint64_t value, std::size_t n) {
  BitWord w(n);
  for (std::size_t i = 0; i < n && i < 64; ++i) {
    w.set(n - 1 - i, (value >> i) & 1u);
  }
  return w;
}

void BitWord::push_back(bool bit) {
  if ((size_ & 7) == 0) bytes_.push_back(0);
  ++size_;
  set(size_ - 1, bit);
}

void BitWord::append(const BitWord& other) {
  if ((size_ & 7) == 0) {
    bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
    size_ += other.size_;
    return;
  }
  for (std::size_t i = 0; i < other.size_; ++i) push_back(other[i]);
}

void BitWord::append_uint(std::uint64_t value, unsigned count) {
  for (unsigned i = count; i-- > 0;) push_back((value >> i) & 1u);
}

void BitWord::pad_to_byte() { size_ = bytes_.size() * 8; }

std::size_t BitWord::popcount() const noexcept {
  std::size_t total = 0;
  for (auto b : bytes_) total += static_cast<std::size_t>(std::popcount(b));
  return total;
}

std::size_t BitWord::hamming(const BitWord& other) const noexcept {
  std::size_t total = 0;
  const std::size_t m = std::min(bytes_.size(), other.bytes_.size());
  for (std::size_t i = 0; i < m; ++i) {
    total += static_cast<std::size_t>(
        std::popcount(static_cast<std::uint8_t>(bytes_[i] ^ other.bytes_[i])));
  }
  return total;
}

BitWord BitWord::operator^(const BitWord& other) const {
  if (size_ != other.size_) fail(ErrorKind::Range, "xor of words with different lengths");
  BitWord out = *this;
  for (std::size_t i = 0; i < bytes_.size(); ++i) out.bytes_[i] ^= other.bytes_[i];
  return out;
}

std::uint64_t BitWord::to_uint() const noexcept {
  std::uint64_t v = 0;
  const std::size_t m = std::min<std::size_t>(size_, 64);
  for (std::size_t i = 0; i < m; ++i) v = (v << 1) | static_cast<std::uint64_t>((*this)[i]);
  return v;
}

std::string BitWord::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

std::strong_ordering BitWord::operator<=>(const BitWord& other) const noexcept {
  if (auto c = size_ <=> other.size_; c != 0) return c;
  // Zero padding makes bytewise comparison agree with bitwise comparison.
  return std::lexicographical_compare_three_way(bytes_.begin(), bytes_.end(),
                                                other.bytes_.begin(), other.bytes_.end());
}

BitWord zeros(std::size_t n) { return BitWord(n, false); }
BitWord ones(std::size_t n) { return BitWord(n, true); }

std::uint64_t content_hash(const BitWord& word) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint8_t b) {
    h ^= b;
    h *= 0x100000001b3ull;
  };
  std::uint64_t n = word.size();
  for (int i = 0; i < 8; ++i) mix(static_cast<std::uint8_t>(n >> (8 * i)));
  for (auto b : word.bytes()) mix(b);
  return h;
}

}  // namespace ardtk
