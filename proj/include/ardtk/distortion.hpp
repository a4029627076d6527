#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ardtk/bitword.hpp"
#include "ardtk/rational.hpp"

namespace ardtk {

using BigCount = boost::multiprecision::cpp_int;

enum class Family { Hamming, Euclidean, List };

const char* to_string(Family family) noexcept;
/// Accepts "hamming", "euclid"/"euclidean" and "list".
Family parse_family(const std::string& name);

struct DistortionSpec {
  Family family = Family::Hamming;
  std::size_t n = 1;

  /// n >= 1; Euclidean distances are exact with denominator 2^n, so n <= 62.
  void validate() const;
};

/// Exact distortion; nullopt stands for infinity.
using Distance = std::optional<Rational>;

/// Hamming: mismatches / n. Euclidean: |x - y| reading both words as
/// n-bit binary fractions. Infinite when the lengths differ.
Distance distance(const DistortionSpec& spec, const BitWord& x, const BitWord& y);

/// List family: ceil(log2 |S|) when x is in S, infinite otherwise. The
/// exact value log2 |S| is irrational unless |S| is a power of two.
Distance distance(const DistortionSpec& spec, const BitWord& x, std::span<const BitWord> set);

/// A distortion ball. Hamming and Euclidean balls are (center, radius);
/// a list ball is its sorted, deduplicated member list with radius
/// ceil(log2 |members|).
struct Ball {
  DistortionSpec spec;
  BitWord center;
  Rational radius;
  std::vector<BitWord> members;

  bool operator==(const Ball&) const = default;
};

/// Throws Error(Range) for radii outside [0, 1/2] (Hamming) or [0, 1]
/// (Euclidean), Error(Domain) for a center of the wrong length.
Ball make_ball(const DistortionSpec& spec, const BitWord& center, const Rational& radius);
Ball make_list_ball(std::size_t n, std::vector<BitWord> members);

bool contains(const Ball& ball, const BitWord& x);

/// Number of flips allowed by a Hamming radius: floor(delta * n).
std::size_t radius_flips(std::size_t n, const Rational& delta);

/// sum_{i <= r} C(n, i).
BigCount hamming_ball_size(std::size_t n, std::size_t r);

/// Hamming ball size b(delta); the only family whose cardinality is
/// independent of the center. Throws Error(Range) outside [0, 1/2] and
/// Error(Domain) for the other families.
BigCount ball_cardinality(const DistortionSpec& spec, const Rational& delta);
BigCount ball_cardinality(const Ball& ball);

double log2_big(const BigCount& value);
/// Smallest l with 2^l >= value; value must be positive.
std::size_t ceil_log2(const BigCount& value);

/// Binary entropy in bits; H(0) = H(1) = 0.
double binary_entropy(double p) noexcept;

struct EntropyBounds {
  double lower;
  double upper;
};

constexpr double kEntropyLowerSlack = 1.0;

/// (nH(delta) - log2(n)/2 - kEntropyLowerSlack, nH(delta)) for a Hamming
/// radius delta in [0, 1/2] with delta*n integral.
EntropyBounds entropy_bounds(std::size_t n, const Rational& delta);

/// Members in increasing lexicographic order. Throws Error(SizeGuard) when
/// n > 24 or the cardinality exceeds `limit`.
std::vector<BitWord> ball_members(const Ball& ball, std::size_t limit = std::size_t{1} << 24);

/// Smallest admissible radius whose ball has ceil(log2 b) >= l, clamped to
/// the largest admissible radius when no ball is that large. Euclidean
/// radii are sized by the interior ball 2*floor(delta 2^n) + 1; for the
/// list family the radius is l itself.
Rational radius_for_log_cardinality(const DistortionSpec& spec, std::size_t l);

/// ceil(log2 b(delta)) for Hamming, interior-ball size for Euclidean,
/// ceil(delta) for the list family.
std::size_t log_cardinality(const DistortionSpec& spec, const Rational& delta);

}  // namespace ardtk
