#pragma once

#include <cstddef>
#include <cstdint>

#include "ardtk/bitword.hpp"

// Lossless block-sorting compressor used as the codelength oracle.
//
// Pipeline per block: Burrows-Wheeler transform over the bit-packed bytes,
// move-to-front over 256 symbols, zero-run-length coding with the two-digit
// bijective RUNA/RUNB alphabet, and an adaptive binary arithmetic coder.
//
// Codeword layout: a LEB128 varint holding 2*n + mode, then the payload.
// mode 0 stores the n input bits verbatim; mode 1 is the compressed stream.
// Compression falls back to mode 0 whenever that is not longer, so every
// codeword is at most n + 8*varint_bytes(2n+1) bits long. The layout is not
// a stability guarantee.

namespace ardtk::codec {

struct CodecParams {
  std::size_t block_size = 65536;  // bits per BWT block, >= 64
  unsigned coder_precision = 32;   // arithmetic coder state bits, 16..47

  void validate() const;
};

struct Codeword {
  BitWord bits;
  std::size_t original_length = 0;

  std::size_t size() const noexcept { return bits.size(); }
  bool operator==(const Codeword&) const = default;
};

Codeword compress(const BitWord& x, const CodecParams& params = {});

/// Throws Error(MalformedCodeword) unless `c` is exactly the output of
/// compress() for some input under the same params.
BitWord decompress(const Codeword& c, const CodecParams& params = {});
BitWord decompress(const BitWord& c, const CodecParams& params = {});

/// |compress(x)| in bits.
std::size_t codelength(const BitWord& x, const CodecParams& params = {});

/// Concatenation of y and x with x starting on a byte boundary, so the
/// block sorter sees x's bytes unshifted.
BitWord join_aligned(const BitWord& y, const BitWord& x);

/// Codelength of the pair (y, x): the cheaper of the length-prefixed
/// aligned concatenation and the two separate codewords.
std::size_t pair_codelength(const BitWord& y, const BitWord& x,
                            const CodecParams& params = {});

/// Estimate of C(x | y): max(0, pair_codelength(y, x) - codelength(y)).
std::size_t conditional_codelength(const BitWord& x, const BitWord& y,
                                   const CodecParams& params = {});

/// Bytes used by the LEB128 encoding of `value`.
std::size_t varint_size(std::uint64_t value) noexcept;

}  // namespace ardtk::codec
