#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ardtk::codec::detail {

struct BwtBlock {
  std::vector<std::uint8_t> last_column;
  std::uint32_t primary = 0;  // row holding the untransformed block
};

/// Sorts all cyclic rotations of `block` by prefix doubling with counting
/// sorts, O(m log m). Equal rotations keep a deterministic order.
BwtBlock bwt_forward(std::span<const std::uint8_t> block);

/// Inverts bwt_forward by walking the LF mapping from the primary row.
std::vector<std::uint8_t> bwt_inverse(std::span<const std::uint8_t> last_column,
                                      std::uint32_t primary);

/// Move-to-front ranks over the identity-initialized 256-symbol list.
void mtf_encode(std::span<std::uint8_t> data);
void mtf_decode(std::span<std::uint8_t> data);

}  // namespace ardtk::codec::detail
