#include "ardtk/random.hpp"

#include <algorithm>

namespace ardtk {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

std::vector<std::size_t> Rng::subset(std::size_t n, std::size_t k) {
  // Partial Fisher-Yates on an index table.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + below(n - i)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

BitWord random_word(Rng& rng, std::size_t n) {
  BitWord w(n);
  for (std::size_t i = 0; i < n; i += 64) {
    const std::uint64_t v = rng.next();
    const std::size_t take = std::min<std::size_t>(64, n - i);
    for (std::size_t j = 0; j < take; ++j) w.set(i + j, (v >> j) & 1u);
  }
  return w;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace ardtk
