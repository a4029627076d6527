#include "ardtk/codec.hpp"

#include <algorithm>
#include <bit>
#include <vector>

#include "ardtk/error.hpp"
#include "binary_coder.hpp"
#include "bwt.hpp"
#include "symbol_model.hpp"

namespace ardtk::codec {

using detail::BinaryDecoder;
using detail::BinaryEncoder;
using detail::Prev;
using detail::SymbolModel;

void CodecParams::validate() const {
  if (block_size < 64) fail(ErrorKind::Domain, "codec block_size must be >= 64 bits");
  if (coder_precision < 16 || coder_precision > 47) {
    fail(ErrorKind::Domain, "codec coder_precision must be in [16, 47]");
  }
}

std::size_t varint_size(std::uint64_t value) noexcept {
  std::size_t n = 1;
  while (value >= 0x80) {
    value >>= 7;
    ++n;
  }
  return n;
}

namespace {

constexpr std::uint64_t kModeRaw = 0;
constexpr std::uint64_t kModeCompressed = 1;

std::size_t block_bytes(const CodecParams& params) { return (params.block_size + 7) / 8; }

unsigned index_bits(std::size_t m) {
  return m <= 1 ? 0u : static_cast<unsigned>(std::bit_width(m - 1));
}

void put_varint(BitWord& out, std::uint64_t value) {
  do {
    std::uint64_t byte = value & 0x7F;
    value >>= 7;
    if (value != 0) byte |= 0x80;
    out.append_uint(byte, 8);
  } while (value != 0);
}

std::uint64_t get_varint(const BitWord& in, std::size_t& pos) {
  std::uint64_t value = 0;
  for (unsigned shift = 0;; shift += 7) {
    if (pos + 8 > in.size() || shift > 63) fail(ErrorKind::MalformedCodeword, "truncated header");
    std::uint64_t byte = 0;
    for (int i = 0; i < 8; ++i) byte = (byte << 1) | static_cast<std::uint64_t>(in[pos++]);
    value |= (byte & 0x7F) << shift;
    if (!(byte & 0x80)) return value;
  }
}

template <typename Encoder>
void encode_block(Encoder& enc, SymbolModel& model, std::span<const std::uint8_t> block) {
  auto bwt = detail::bwt_forward(block);
  enc.encode_raw(bwt.primary, index_bits(block.size()));
  detail::mtf_encode(bwt.last_column);

  Prev prev = Prev::Start;
  std::size_t run = 0;
  auto flush_run = [&] {
    // Bijective base 2: digit 1 is RUNA, digit 2 is RUNB.
    unsigned digit_index = 0;
    while (run > 0) {
      const bool runb = (run & 1u) == 0;
      model.put_digit(enc, prev, digit_index++, runb);
      run = (run - (runb ? 2 : 1)) / 2;
    }
  };
  for (auto rank : bwt.last_column) {
    if (rank == 0) {
      ++run;
      continue;
    }
    flush_run();
    model.put_rank(enc, prev, rank);
  }
  flush_run();
}

template <typename Sink>
void encode_stream(Sink& sink, const BitWord& x, const CodecParams& params) {
  BinaryEncoder<Sink> enc(sink, params.coder_precision);
  SymbolModel model;
  const auto bytes = x.bytes();
  const std::size_t bb = block_bytes(params);
  for (std::size_t at = 0; at < bytes.size(); at += bb) {
    encode_block(enc, model, bytes.subspan(at, std::min(bb, bytes.size() - at)));
  }
  if (!bytes.empty()) enc.finish();
}

}  // namespace

Codeword compress(const BitWord& x, const CodecParams& params) {
  params.validate();
  const std::size_t n = x.size();
  detail::WordSink sink;
  encode_stream(sink, x, params);

  Codeword c;
  c.original_length = n;
  if (n == 0 || sink.significant() >= n) {
    put_varint(c.bits, 2 * static_cast<std::uint64_t>(n) + kModeRaw);
    c.bits.append(x);
  } else {
    put_varint(c.bits, 2 * static_cast<std::uint64_t>(n) + kModeCompressed);
    c.bits.append(sink.take());
  }
  return c;
}

std::size_t codelength(const BitWord& x, const CodecParams& params) {
  params.validate();
  const std::size_t n = x.size();
  std::size_t payload = n;
  std::uint64_t mode = kModeRaw;
  if (n > 0) {
    detail::CountingSink sink;
    encode_stream(sink, x, params);
    if (sink.significant() < n) {
      payload = sink.significant();
      mode = kModeCompressed;
    }
  }
  return 8 * varint_size(2 * static_cast<std::uint64_t>(n) + mode) + payload;
}

BitWord decompress(const BitWord& c, const CodecParams& params) {
  params.validate();
  std::size_t pos = 0;
  const std::uint64_t header = get_varint(c, pos);
  const std::uint64_t mode = header & 1u;
  const std::uint64_t n64 = header >> 1;
  if (n64 > (std::uint64_t{1} << 40)) fail(ErrorKind::MalformedCodeword, "implausible length");
  const auto n = static_cast<std::size_t>(n64);

  BitWord out;
  if (mode == kModeRaw) {
    if (c.size() - pos != n) fail(ErrorKind::MalformedCodeword, "stored payload length mismatch");
    for (std::size_t i = 0; i < n; ++i) out.push_back(c[pos + i]);
  } else {
    if (n == 0) fail(ErrorKind::MalformedCodeword, "compressed mode for empty input");
    BitWord payload;
    for (std::size_t i = pos; i < c.size(); ++i) payload.push_back(c[i]);
    BinaryDecoder dec(payload, 0, params.coder_precision);
    SymbolModel model;
    const std::size_t total = (n + 7) / 8;
    const std::size_t bb = block_bytes(params);
    std::vector<std::uint8_t> bytes;
    bytes.reserve(total);
    for (std::size_t at = 0; at < total; at += bb) {
      const std::size_t m = std::min(bb, total - at);
      const auto primary = static_cast<std::uint32_t>(dec.decode_raw(index_bits(m)));
      if (primary >= m) fail(ErrorKind::MalformedCodeword, "primary index out of range");
      std::vector<std::uint8_t> ranks;
      ranks.reserve(m);
      Prev prev = Prev::Start;
      std::size_t run = 0;
      unsigned digit_index = 0;
      while (ranks.size() + run < m) {
        bool runb = false;
        unsigned rank = 0;
        if (model.get(dec, prev, digit_index, runb, rank)) {
          if (digit_index >= 40) fail(ErrorKind::MalformedCodeword, "run length overflow");
          run += (std::size_t{runb ? 2u : 1u}) << digit_index;
          ++digit_index;
          if (ranks.size() + run > m) fail(ErrorKind::MalformedCodeword, "run exceeds block");
        } else {
          ranks.insert(ranks.end(), run, 0);
          run = 0;
          digit_index = 0;
          ranks.push_back(static_cast<std::uint8_t>(rank));
        }
      }
      ranks.insert(ranks.end(), run, 0);
      detail::mtf_decode(ranks);
      auto block = detail::bwt_inverse(ranks, primary);
      bytes.insert(bytes.end(), block.begin(), block.end());
    }
    out = BitWord::from_bytes(bytes, n);
    if (!std::equal(bytes.begin(), bytes.end(), out.bytes().begin())) {
      fail(ErrorKind::MalformedCodeword, "nonzero padding bits");
    }
  }
  // Only canonical codewords are accepted.
  if (compress(out, params).bits != c) fail(ErrorKind::MalformedCodeword, "non-canonical codeword");
  return out;
}

BitWord decompress(const Codeword& c, const CodecParams& params) {
  BitWord out = decompress(c.bits, params);
  if (out.size() != c.original_length) {
    fail(ErrorKind::MalformedCodeword, "header length disagrees with codeword metadata");
  }
  return out;
}

BitWord join_aligned(const BitWord& y, const BitWord& x) {
  BitWord joined = y;
  joined.pad_to_byte();
  joined.append(x);
  return joined;
}

std::size_t pair_codelength(const BitWord& y, const BitWord& x, const CodecParams& params) {
  // The joint header carries |y| and swaps the concatenation's own length
  // field for |x|, which together determine the total.
  const BitWord joined = join_aligned(y, x);
  const std::size_t joined_len = codelength(joined, params);
  const std::size_t own_header = 8 * varint_size(2 * static_cast<std::uint64_t>(joined.size()) + 1);
  const std::size_t pair_header = 8 * (varint_size(y.size()) + varint_size(2 * static_cast<std::uint64_t>(x.size()) + 1));
  const std::size_t joint = joined_len - own_header + pair_header;
  return std::min(joint, codelength(y, params) + codelength(x, params));
}

std::size_t conditional_codelength(const BitWord& x, const BitWord& y,
                                   const CodecParams& params) {
  const std::size_t pair = pair_codelength(y, x, params);
  const std::size_t alone = codelength(y, params);
  return pair > alone ? pair - alone : 0;
}

}  // namespace ardtk::codec
