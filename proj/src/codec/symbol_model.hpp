#pragma once

#include <array>
#include <bit>
#include <cstdint>

#include "binary_coder.hpp"

namespace ardtk::codec::detail {

// Binarization of the zero-run-coded MTF stream.
//
// A symbol is either a run digit (RUNA = 1, RUNB = 2 in bijective base 2,
// least significant digit first) or a nonzero MTF rank r in 1..255. The
// run/rank flag is conditioned on the previous symbol's class; a rank is
// sent as its bucket floor(log2 r) in unary followed by the bits below the
// leading one at probability 1/2. Adaptive contexts for those low bits cost
// more to learn on small blocks than they ever save.

enum class Prev : std::uint8_t {
  Start = 0,
  RankOne,
  RankHigh,
  Digit1,
  Digit2,
  Digit3,
};
constexpr std::size_t kPrevClasses = 6;

struct SymbolModel {
  std::array<BitModel, kPrevClasses> is_run{};
  std::array<BitModel, 3> digit{};
  std::array<std::array<BitModel, 8>, 2> bucket = bucket_priors();

  // Bucket flags start at the odds of a uniformly distributed rank, held
  // with the weight of kPriorWeight observations.
  static constexpr std::uint32_t kPriorWeight = 32;
  static std::array<std::array<BitModel, 8>, 2> bucket_priors() {
    std::array<std::array<BitModel, 8>, 2> out{};
    for (auto& row : out) {
      for (unsigned i = 0; i < 8; ++i) {
        const double at_least = 256.0 - double(1u << i);
        const double above = 256.0 - double(1u << (i + 1));
        const double p_stop = 1.0 - above / at_least;
        row[i].p0 = static_cast<std::uint32_t>(p_stop * kProbOne + 0.5);
        if (row[i].p0 < 32) row[i].p0 = 32;
        row[i].count = kPriorWeight;
      }
    }
    return out;
  }

  static Prev after_digit(unsigned digit_index) {
    return digit_index == 0 ? Prev::Digit1 : digit_index == 1 ? Prev::Digit2 : Prev::Digit3;
  }
  static Prev after_rank(unsigned rank) { return rank == 1 ? Prev::RankOne : Prev::RankHigh; }
  static std::size_t bucket_ctx(Prev prev) {
    return prev == Prev::Digit1 || prev == Prev::Digit2 || prev == Prev::Digit3 ? 1 : 0;
  }

  template <typename Encoder>
  void put_digit(Encoder& enc, Prev& prev, unsigned digit_index, bool runb) {
    enc.encode(true, is_run[static_cast<std::size_t>(prev)]);
    enc.encode(runb, digit[digit_index < 2 ? digit_index : 2]);
    prev = after_digit(digit_index);
  }

  template <typename Encoder>
  void put_rank(Encoder& enc, Prev& prev, unsigned rank) {
    enc.encode(false, is_run[static_cast<std::size_t>(prev)]);
    const unsigned b = static_cast<unsigned>(std::bit_width(rank)) - 1;
    auto& buckets = bucket[bucket_ctx(prev)];
    for (unsigned i = 0; i < 7; ++i) {
      enc.encode(b > i, buckets[i]);
      if (b == i) break;
    }
    enc.encode_raw(rank, b);
    prev = after_rank(rank);
  }

  /// Returns true for a run digit (with `runb` set), false for a rank.
  template <typename Decoder>
  bool get(Decoder& dec, Prev& prev, unsigned digit_index, bool& runb, unsigned& rank) {
    if (dec.decode(is_run[static_cast<std::size_t>(prev)])) {
      runb = dec.decode(digit[digit_index < 2 ? digit_index : 2]);
      prev = after_digit(digit_index);
      return true;
    }
    auto& buckets = bucket[bucket_ctx(prev)];
    unsigned b = 0;
    while (b < 7 && dec.decode(buckets[b])) ++b;
    rank = static_cast<unsigned>((std::uint64_t{1} << b) | dec.decode_raw(b));
    prev = after_rank(rank);
    return false;
  }
};

}  // namespace ardtk::codec::detail
