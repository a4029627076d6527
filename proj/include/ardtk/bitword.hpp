#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ardtk {

/// Fixed-length binary string, packed MSB-first into bytes.
///
/// Bit i lives in byte i/8 at bit position 7 - i%8. Padding bits of the last
/// byte are always zero, so two words compare equal iff their packed bytes
/// and lengths are equal.
class BitWord {
 public:
  BitWord() = default;
  explicit BitWord(std::size_t n, bool fill = false);

  static BitWord from_string(std::string_view bits);
  static BitWord from_bytes(std::span<const std::uint8_t> bytes, std::size_t n);
  /// Low `n` bits of `value`, most significant first.
  static BitWord from_uint(std::uint64_t value, std::size_t n);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const noexcept {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }
  void set(std::size_t i, bool bit) noexcept {
    const auto mask = static_cast<std::uint8_t>(0x80u >> (i & 7));
    if (bit) {
      bytes_[i >> 3] |= mask;
    } else {
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }
  }
  void flip(std::size_t i) noexcept {
    bytes_[i >> 3] ^= static_cast<std::uint8_t>(0x80u >> (i & 7));
  }

  void push_back(bool bit);
  void append(const BitWord& other);
  /// Appends the low `count` bits of `value`, most significant first.
  void append_uint(std::uint64_t value, unsigned count);
  /// Zero-pads up to the next byte boundary.
  void pad_to_byte();

  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  std::size_t popcount() const noexcept;
  /// Number of positions where the words differ; sizes must match.
  std::size_t hamming(const BitWord& other) const noexcept;
  BitWord operator^(const BitWord& other) const;

  /// Value of the first min(size, 64) bits as an unsigned integer.
  std::uint64_t to_uint() const noexcept;
  std::string to_string() const;

  /// Shortlex order: shorter words first, then lexicographic.
  std::strong_ordering operator<=>(const BitWord& other) const noexcept;
  bool operator==(const BitWord& other) const noexcept = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

BitWord zeros(std::size_t n);
BitWord ones(std::size_t n);

/// 64-bit FNV-1a over length and packed bytes; stable across platforms.
std::uint64_t content_hash(const BitWord& word) noexcept;

}  // namespace ardtk
