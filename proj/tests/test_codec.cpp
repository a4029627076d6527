#include <algorithm>
#include <map>
#include <numeric>
#include <thread>

#include "ardtk/codec.hpp"
#include "ardtk/error.hpp"
#include "ardtk/random.hpp"
#include "codec/bwt.hpp"
#include "doctest.h"

using namespace ardtk;
using namespace ardtk::codec;

namespace {

// Sorted-rotations oracle for the block sorter.
detail::BwtBlock naive_bwt(const std::vector<std::uint8_t>& s) {
  const std::size_t m = s.size();
  std::vector<std::size_t> rot(m);
  std::iota(rot.begin(), rot.end(), 0);
  std::stable_sort(rot.begin(), rot.end(), [&](std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto ca = s[(a + i) % m];
      const auto cb = s[(b + i) % m];
      if (ca != cb) return ca < cb;
    }
    return false;
  });
  detail::BwtBlock out;
  for (std::size_t i = 0; i < m; ++i) {
    out.last_column.push_back(s[(rot[i] + m - 1) % m]);
    if (rot[i] == 0) out.primary = static_cast<std::uint32_t>(i);
  }
  return out;
}

}  // namespace

TEST_CASE("bwt matches sorted rotations on aperiodic blocks") {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    std::vector<std::uint8_t> s(1 + rng.below(60));
    const unsigned alpha = 1 + static_cast<unsigned>(rng.below(4));
    for (auto& c : s) c = static_cast<std::uint8_t>(rng.below(alpha));
    const auto got = detail::bwt_forward(s);
    const auto want = naive_bwt(s);
    CHECK(got.last_column == want.last_column);
    CHECK(detail::bwt_inverse(got.last_column, got.primary) == s);
  }
}

TEST_CASE("bwt inverse on periodic blocks") {
  std::vector<std::uint8_t> s = {1, 2, 1, 2, 1, 2};
  const auto b = detail::bwt_forward(s);
  CHECK(detail::bwt_inverse(b.last_column, b.primary) == s);
  std::vector<std::uint8_t> z(100, 0);
  const auto bz = detail::bwt_forward(z);
  CHECK(detail::bwt_inverse(bz.last_column, bz.primary) == z);
}

TEST_CASE("mtf round trip") {
  Rng rng(5);
  std::vector<std::uint8_t> s(500);
  for (auto& c : s) c = static_cast<std::uint8_t>(rng.below(256));
  auto t = s;
  detail::mtf_encode(t);
  detail::mtf_decode(t);
  CHECK(t == s);
  std::vector<std::uint8_t> rep = {7, 7, 7, 3, 3};
  detail::mtf_encode(rep);
  CHECK(rep == std::vector<std::uint8_t>{7, 0, 0, 4, 0});
}

TEST_CASE("empty word") {
  const auto c = compress(BitWord());
  CHECK(c.size() <= 16);
  CHECK(codelength(BitWord()) <= 16);
  CHECK(decompress(c).empty());
}

TEST_CASE("short word round trip") {
  const auto x = BitWord::from_string("10110");
  CHECK(decompress(compress(x)) == x);
}

TEST_CASE("all-zero word compresses") {
  const auto x = zeros(1024);
  CHECK(codelength(x) <= 128);
  CHECK(decompress(compress(x)) == x);
}

TEST_CASE("codelength equals codeword size") {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = rng.below(700);
    BitWord x = random_word(rng, n);
    if (t % 3 == 0) {
      for (std::size_t i = 0; i < n; ++i) x.set(i, i % 7 == 0);
    }
    CHECK(codelength(x) == compress(x).size());
  }
}

TEST_CASE("random round trips") {
  Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = rng.below(4097);
    const auto x = random_word(rng, n);
    const auto c = compress(x);
    REQUIRE(decompress(c) == x);
    CHECK(c.size() <= n + 64);
  }
  const auto big = random_word(rng, 4096);
  CHECK(decompress(compress(big)) == big);
}

TEST_CASE("structured round trips across small blocks") {
  CodecParams p;
  p.block_size = 64;
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = rng.below(2000);
    BitWord x(n);
    const std::size_t period = 1 + rng.below(20);
    for (std::size_t i = 0; i < n; ++i) x.set(i, (i % period) < period / 2 || rng.below(50) == 0);
    const auto c = compress(x, p);
    REQUIRE(decompress(c, p) == x);
    CHECK(codelength(x, p) == c.size());
  }
}

TEST_CASE("exhaustive overhead and counting over all 12-bit words") {
  std::map<std::size_t, std::size_t> by_length;
  std::size_t worst = 0;
  for (std::uint64_t v = 0; v < 4096; ++v) {
    const auto x = BitWord::from_uint(v, 12);
    const auto l = codelength(x);
    worst = std::max(worst, l);
    ++by_length[l];
  }
  CHECK(worst <= 12 + 64);
  for (std::size_t ell = 0; ell <= 12; ++ell) {
    std::size_t below = 0;
    for (auto [l, c] : by_length) {
      if (l < ell) below += c;
    }
    CHECK(below < (std::size_t{1} << ell));
  }
}

TEST_CASE("params validation") {
  CodecParams p;
  p.block_size = 63;
  CHECK_THROWS_AS(compress(zeros(8), p), Error);
  p.block_size = 64;
  p.coder_precision = 15;
  CHECK_THROWS_AS(codelength(zeros(8), p), Error);
  p.coder_precision = 16;
  const auto x = ones(300);
  CHECK(decompress(compress(x, p), p) == x);
}

TEST_CASE("malformed codewords are rejected or canonical") {
  Rng rng(31);
  CHECK_THROWS_AS(decompress(BitWord()), Error);
  CHECK_THROWS_AS(decompress(BitWord::from_string("1000000")), Error);
  for (int t = 0; t < 300; ++t) {
    BitWord x = random_word(rng, 1 + rng.below(300));
    if (t % 2 == 0) {
      for (std::size_t i = 0; i < x.size(); ++i) x.set(i, (i / 9) % 2 == 0);
    }
    BitWord c = compress(x).bits;
    const int kind = t % 3;
    if (kind == 0) {
      c.flip(rng.below(c.size()));
    } else if (kind == 1) {
      BitWord cut;
      for (std::size_t i = 0; i + 1 < c.size(); ++i) cut.push_back(c[i]);
      c = cut;
    } else {
      c.push_back(true);
    }
    try {
      const BitWord y = decompress(c);
      CHECK(compress(y).bits == c);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MalformedCodeword);
    }
  }
}

TEST_CASE("codeword metadata must agree with header") {
  auto c = compress(ones(40));
  c.original_length = 41;
  CHECK_THROWS_AS(decompress(c), Error);
}

TEST_CASE("conditional codelength examples") {
  Rng rng(4);
  const auto x = random_word(rng, 4096);
  CHECK(conditional_codelength(x, x) <= 64);
  const auto y = random_word(rng, 500);
  CHECK(conditional_codelength(BitWord(), y) <= 16);
  for (int t = 0; t < 20; ++t) {
    const auto w = random_word(rng, rng.below(2000));
    const auto cx = conditional_codelength(w, BitWord());
    const auto lx = codelength(w);
    CHECK(cx + 16 >= lx);
    CHECK(cx <= lx + 16);
  }
}

TEST_CASE("conditional codelength is bounded by the unconditional one") {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto x = random_word(rng, rng.below(600));
    auto y = random_word(rng, rng.below(600));
    CHECK(conditional_codelength(x, y) <= codelength(x) + 16);
  }
}

TEST_CASE("join_aligned places x on a byte boundary") {
  const auto j = join_aligned(BitWord::from_string("101"), BitWord::from_string("11"));
  CHECK(j.to_string() == "1010000011");
}

TEST_CASE("varint sizes") {
  CHECK(varint_size(0) == 1);
  CHECK(varint_size(127) == 1);
  CHECK(varint_size(128) == 2);
  CHECK(varint_size(16383) == 2);
  CHECK(varint_size(16384) == 3);
}

TEST_CASE("determinism across threads") {
  Rng rng(99);
  std::vector<BitWord> words;
  for (int t = 0; t < 16; ++t) words.push_back(random_word(rng, 64 * (t + 1)));
  std::vector<std::size_t> serial, parallel(words.size());
  for (const auto& w : words) serial.push_back(codelength(w));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < words.size(); ++i) {
    pool.emplace_back([&, i] { parallel[i] = codelength(words[i]); });
  }
  for (auto& th : pool) th.join();
  CHECK(serial == parallel);
}
