#include "bwt.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace ardtk::codec::detail {

BwtBlock bwt_forward(std::span<const std::uint8_t> block) {
  const std::size_t m = block.size();
  BwtBlock out;
  if (m == 0) return out;

  std::vector<std::uint32_t> order(m), cls(m), next_order(m), next_cls(m);
  std::vector<std::uint32_t> count(std::max<std::size_t>(m, 256), 0);

  for (std::size_t i = 0; i < m; ++i) ++count[block[i]];
  for (std::size_t c = 1; c < 256; ++c) count[c] += count[c - 1];
  for (std::size_t i = m; i-- > 0;) order[--count[block[i]]] = static_cast<std::uint32_t>(i);

  std::uint32_t classes = 1;
  cls[order[0]] = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (block[order[i]] != block[order[i - 1]]) ++classes;
    cls[order[i]] = classes - 1;
  }

  for (std::size_t h = 1; h < m && classes < m; h <<= 1) {
    // Rotations sorted by their second half, then stable sort by first half.
    for (std::size_t i = 0; i < m; ++i) {
      next_order[i] = static_cast<std::uint32_t>((order[i] + m - h % m) % m);
    }
    std::fill(count.begin(), count.begin() + classes, 0);
    for (std::size_t i = 0; i < m; ++i) ++count[cls[next_order[i]]];
    for (std::size_t c = 1; c < classes; ++c) count[c] += count[c - 1];
    for (std::size_t i = m; i-- > 0;) order[--count[cls[next_order[i]]]] = next_order[i];

    next_cls[order[0]] = 0;
    std::uint32_t fresh = 1;
    for (std::size_t i = 1; i < m; ++i) {
      const auto a = order[i];
      const auto b = order[i - 1];
      if (cls[a] != cls[b] || cls[(a + h) % m] != cls[(b + h) % m]) ++fresh;
      next_cls[a] = fresh - 1;
    }
    cls.swap(next_cls);
    classes = fresh;
  }

  out.last_column.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.last_column[i] = block[(order[i] + m - 1) % m];
    if (order[i] == 0) out.primary = static_cast<std::uint32_t>(i);
  }
  return out;
}

std::vector<std::uint8_t> bwt_inverse(std::span<const std::uint8_t> last_column,
                                      std::uint32_t primary) {
  const std::size_t m = last_column.size();
  std::vector<std::uint8_t> out(m);
  if (m == 0) return out;

  std::array<std::uint32_t, 256> base{};
  for (auto c : last_column) ++base[c];
  std::uint32_t running = 0;
  for (auto& b : base) {
    const auto c = b;
    b = running;
    running += c;
  }
  std::vector<std::uint32_t> lf(m);
  std::array<std::uint32_t, 256> seen{};
  for (std::size_t i = 0; i < m; ++i) {
    const auto c = last_column[i];
    lf[i] = base[c] + seen[c]++;
  }
  std::uint32_t row = primary;
  for (std::size_t k = m; k-- > 0;) {
    out[k] = last_column[row];
    row = lf[row];
  }
  return out;
}

void mtf_encode(std::span<std::uint8_t> data) {
  std::array<std::uint8_t, 256> table;
  std::iota(table.begin(), table.end(), 0);
  for (auto& v : data) {
    std::uint8_t rank = 0;
    while (table[rank] != v) ++rank;
    std::copy_backward(table.begin(), table.begin() + rank, table.begin() + rank + 1);
    table[0] = v;
    v = rank;
  }
}

void mtf_decode(std::span<std::uint8_t> data) {
  std::array<std::uint8_t, 256> table;
  std::iota(table.begin(), table.end(), 0);
  for (auto& v : data) {
    const std::uint8_t rank = v;
    const std::uint8_t sym = table[rank];
    std::copy_backward(table.begin(), table.begin() + rank, table.begin() + rank + 1);
    table[0] = sym;
    v = sym;
  }
}

}  // namespace ardtk::codec::detail
