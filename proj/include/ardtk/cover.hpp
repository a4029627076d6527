#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ardtk/bitword.hpp"
#include "ardtk/rational.hpp"

// Randomized covering of Hamming balls by smaller Hamming balls.
//
// A ball B(y, delta) is covered shell by shell: for the shell of words at
// distance exactly D from y, centers are drawn uniformly at distance f from
// y, where d + f(1 - 2d) = D. Every candidate set is checked exhaustively
// and then pruned; only verified covers are returned.

namespace ardtk {

struct CoverTarget {
  bool whole_cube = false;
  BitWord center;  // ignored for the whole cube
  Rational radius;

  static CoverTarget cube() { return CoverTarget{true, {}, Rational(0)}; }
  static CoverTarget ball(BitWord center, Rational radius) {
    return CoverTarget{false, std::move(center), radius};
  }
};

struct CoverParams {
  unsigned c = 1;              // centers per shell: ceil(n^(c+1) b(delta) / b(d))
  unsigned max_attempts = 32;  // per shell, reseeded
};

struct ShellStat {
  Rational shell;  // distance from the ball center
  Rational offset;  // f
  std::size_t sampled = 0;
  std::size_t kept = 0;
  unsigned attempts = 0;
};

struct CoverResult {
  std::vector<BitWord> centers;  // sorted, distinct
  CoverTarget target;
  Rational small_radius;
  std::uint64_t seed = 0;
  unsigned retries_used = 0;
  std::vector<ShellStat> shells;
};

/// (D - d)/(1 - 2d) rounded to the nearest multiple of 1/n, ties down.
/// Requires 0 <= d < D <= 1/2.
Rational shell_offset(const Rational& d, const Rational& shell, std::size_t n);

/// Verified cover of B(center, delta) by radius-d balls; center defaults to
/// 0^n. Requires 0 <= d <= delta <= 1/2 and n <= 24.
CoverResult cover_ball(std::size_t n, const Rational& delta, const Rational& d, std::uint64_t seed,
                       const CoverParams& params = {}, std::optional<BitWord> center = std::nullopt);

/// Verified cover of {0,1}^n, built from covers of the two balls of radius
/// floor(n/2)/n around 0^n and 1^n.
CoverResult cover_space(std::size_t n, const Rational& d, std::uint64_t seed,
                        const CoverParams& params = {});

struct CoverCheck {
  bool ok = false;
  std::optional<BitWord> witness;  // least uncovered target word
};

/// Exhaustive check for n <= 24.
CoverCheck verify_cover(std::size_t n, const CoverTarget& target,
                        const std::vector<BitWord>& centers, const Rational& d);

/// n^5 * |target| / b(d), the size allowed for a constructed cover.
double cover_size_bound(std::size_t n, double target_size, const Rational& d);

}  // namespace ardtk
