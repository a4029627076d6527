#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>

#include "ardtk/bitword.hpp"

namespace ardtk::codec::detail {

constexpr unsigned kProbBits = 16;
constexpr std::uint32_t kProbOne = 1u << kProbBits;
constexpr unsigned kRateLimit = 1000;

/// Adaptive probability that the next bit is 0, in units of 2^-16.
///
/// The step size starts at 1/2 and shrinks as 1/(count + 2) until it
/// reaches 1/(kRateLimit + 2), so early estimates behave like a frequency
/// count and later ones track drift.
struct BitModel {
  std::uint32_t p0 = kProbOne / 2;
  std::uint32_t count = 0;

  void update(bool bit) noexcept {
    const std::int64_t target = bit ? 0 : kProbOne;
    const std::int64_t p = p0;
    std::int64_t next = p + (target - p) / static_cast<std::int64_t>(count + 2);
    next = std::clamp<std::int64_t>(next, 32, kProbOne - 32);
    p0 = static_cast<std::uint32_t>(next);
    if (count < kRateLimit) ++count;
  }
};

/// Appends to a BitWord, tracking the position after the last 1 bit so the
/// payload can drop trailing zeros (the decoder reads zeros past the end).
class WordSink {
 public:
  void put(bool bit) {
    out_.push_back(bit);
    if (bit) significant_ = out_.size();
  }
  std::size_t significant() const noexcept { return significant_; }
  BitWord take() {
    BitWord trimmed;
    for (std::size_t i = 0; i < significant_; ++i) trimmed.push_back(out_[i]);
    return trimmed;
  }

 private:
  BitWord out_;
  std::size_t significant_ = 0;
};

/// Same accounting as WordSink without storing anything.
class CountingSink {
 public:
  void put(bool bit) noexcept {
    ++written_;
    if (bit) significant_ = written_;
  }
  std::size_t significant() const noexcept { return significant_; }

 private:
  std::size_t written_ = 0;
  std::size_t significant_ = 0;
};

/// Integer binary arithmetic coder with carry handled by pending
/// opposite bits (Witten, Neal and Cleary), `precision` bits of state.
template <typename Sink>
class BinaryEncoder {
 public:
  BinaryEncoder(Sink& sink, unsigned precision)
      : sink_(sink),
        top_((std::uint64_t{1} << precision) - 1),
        half_(std::uint64_t{1} << (precision - 1)),
        quarter_(std::uint64_t{1} << (precision - 2)),
        high_(top_) {}

  void encode(bool bit, std::uint32_t p0) {
    const std::uint64_t range = high_ - low_ + 1;
    const std::uint64_t split = low_ + ((range * p0) >> kProbBits) - 1;
    if (bit) {
      low_ = split + 1;
    } else {
      high_ = split;
    }
    for (;;) {
      if (high_ < half_) {
        emit(false);
      } else if (low_ >= half_) {
        emit(true);
        low_ -= half_;
        high_ -= half_;
      } else if (low_ >= quarter_ && high_ < half_ + quarter_) {
        ++pending_;
        low_ -= quarter_;
        high_ -= quarter_;
      } else {
        break;
      }
      low_ <<= 1;
      high_ = (high_ << 1) | 1;
    }
  }

  void encode(bool bit, BitModel& model) {
    encode(bit, model.p0);
    model.update(bit);
  }

  void encode_raw(std::uint64_t value, unsigned count) {
    for (unsigned i = count; i-- > 0;) encode((value >> i) & 1u, kProbOne / 2);
  }

  /// Two bits select a quarter inside [low, high]; any continuation decodes.
  void finish() {
    ++pending_;
    emit(low_ >= quarter_);
  }

 private:
  void emit(bool bit) {
    sink_.put(bit);
    for (; pending_ > 0; --pending_) sink_.put(!bit);
  }

  Sink& sink_;
  std::uint64_t top_, half_, quarter_;
  std::uint64_t low_ = 0, high_;
  std::uint64_t pending_ = 0;
};

class BinaryDecoder {
 public:
  BinaryDecoder(const BitWord& src, std::size_t offset, unsigned precision)
      : src_(src),
        pos_(offset),
        top_((std::uint64_t{1} << precision) - 1),
        half_(std::uint64_t{1} << (precision - 1)),
        quarter_(std::uint64_t{1} << (precision - 2)),
        high_(top_) {
    for (unsigned i = 0; i < precision; ++i) value_ = (value_ << 1) | next_bit();
  }

  bool decode(std::uint32_t p0) {
    const std::uint64_t range = high_ - low_ + 1;
    const std::uint64_t split = low_ + ((range * p0) >> kProbBits) - 1;
    const bool bit = value_ > split;
    if (bit) {
      low_ = split + 1;
    } else {
      high_ = split;
    }
    for (;;) {
      if (high_ < half_) {
        // nothing to subtract
      } else if (low_ >= half_) {
        low_ -= half_;
        high_ -= half_;
        value_ -= half_;
      } else if (low_ >= quarter_ && high_ < half_ + quarter_) {
        low_ -= quarter_;
        high_ -= quarter_;
        value_ -= quarter_;
      } else {
        break;
      }
      low_ <<= 1;
      high_ = (high_ << 1) | 1;
      value_ = (value_ << 1) | next_bit();
    }
    return bit;
  }

  bool decode(BitModel& model) {
    const bool bit = decode(model.p0);
    model.update(bit);
    return bit;
  }

  std::uint64_t decode_raw(unsigned count) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < count; ++i) v = (v << 1) | static_cast<std::uint64_t>(decode(kProbOne / 2));
    return v;
  }

 private:
  std::uint64_t next_bit() noexcept {
    const bool bit = pos_ < src_.size() && src_[pos_];
    ++pos_;
    return bit ? 1u : 0u;
  }

  const BitWord& src_;
  std::size_t pos_;
  std::uint64_t top_, half_, quarter_;
  std::uint64_t low_ = 0, high_;
  std::uint64_t value_ = 0;
};

}  // namespace ardtk::codec::detail
