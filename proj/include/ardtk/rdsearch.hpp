#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ardtk/bitword.hpp"
#include "ardtk/codec.hpp"
#include "ardtk/distortion.hpp"
#include "ardtk/rational.hpp"

// Anytime estimation of individual rate-distortion curves.
//
// The rate of a destination word is its codec codelength. Every evaluated
// destination is a feasible point for every curve, so all three curves are
// read off one Pareto archive of (distortion, rate) pairs. With a budget of
// at least 2^n evaluations (Hamming, n <= 24) the archive is the whole cube
// and every curve is exact for the codec.

namespace ardtk {

struct Candidate {
  BitWord destination;           // Hamming and Euclidean
  std::vector<BitWord> members;  // list family, sorted
  std::size_t score = 0;         // codelength in bits
  Rational distortion;

  std::uint64_t id() const;
};

struct TracePoint {
  std::size_t evaluation;
  std::size_t best_score;
};

struct SearchParams {
  std::size_t budget = 20000;      // distinct codelength evaluations
  std::uint64_t seed = 1;
  std::vector<BitWord> seeds;      // extra starting destinations
  codec::CodecParams codec;
  unsigned threads = 1;
  std::size_t starts = 4;          // hill-climbing restarts per radius
  std::size_t width = 0;           // row length when x is an image; enables 2-D moves
};

struct SearchResult {
  Candidate best;
  std::vector<TracePoint> trace;   // best-so-far score, nonincreasing
  std::size_t evaluations = 0;
  bool exhaustive = false;
};

/// Lowest-rate destination within distortion delta of x. x itself is
/// always evaluated first, so the result is feasible. Exhaustive when the
/// budget covers the whole ball.
SearchResult search_min_rate(const BitWord& x, const DistortionSpec& spec, const Rational& delta,
                             const SearchParams& params);

/// Rate-sorted Pareto front of (distortion, rate) over evaluated
/// destinations; ties go to the lexicographically least destination.
class ParetoArchive {
 public:
  void offer(const Candidate& c);
  void merge(const ParetoArchive& other);

  /// Least rate with distortion <= delta.
  const Candidate* best_within(const Rational& delta) const;
  /// Least distortion with rate <= bits.
  const Candidate* best_under(std::size_t bits) const;
  std::vector<Candidate> front() const;

 private:
  std::map<Rational, Candidate> by_distortion_;
};

enum class Axis { Rate, Distortion, Canonical };
const char* to_string(Axis axis) noexcept;
Axis parse_axis(const std::string& name);

struct CurvePoint {
  Rational axis_value;               // rate, delta or l
  std::optional<std::size_t> bits;   // rate; missing when nothing qualifies
  Distance distortion;               // infinite when nothing qualifies
  std::uint64_t candidate_hash = 0;
  BitWord destination;
};

struct CurveEstimate {
  Axis axis = Axis::Rate;
  std::vector<CurvePoint> points;
  std::size_t budget_used = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  double slack = 0;  // c log2 n, canonical axis only
};

/// Evaluates the archive for x under `params`: the whole cube when the
/// budget allows, otherwise searches over a ladder of radii.
ParetoArchive explore(const BitWord& x, const DistortionSpec& spec, const SearchParams& params,
                      std::size_t* evaluations = nullptr, bool* exhaustive = nullptr);
/// Same, with the heuristic budget split over the given radii.
ParetoArchive explore_radii(const BitWord& x, const DistortionSpec& spec, const SearchParams& params,
                            std::vector<Rational> radii, std::size_t* evaluations = nullptr,
                            bool* exhaustive = nullptr);

/// d_x(r) on a sorted rate grid, running minima applied.
CurveEstimate distortion_rate_curve(const BitWord& x, const DistortionSpec& spec,
                                    const std::vector<std::size_t>& rate_grid,
                                    const SearchParams& params);
/// r_x(delta) on a sorted delta grid.
CurveEstimate rate_distortion_curve(const BitWord& x, const DistortionSpec& spec,
                                    const std::vector<Rational>& delta_grid,
                                    const SearchParams& params);

constexpr double kDefaultSlack = 8.0;

/// g_x(l) proxy: least center rate at radius delta(l), with slack c log2 n.
CurveEstimate canonical_estimate(const BitWord& x, const DistortionSpec& spec,
                                 const std::vector<std::size_t>& l_grid, const SearchParams& params,
                                 double c = kDefaultSlack);

/// Curves read off an existing archive.
CurveEstimate curve_from_archive(const ParetoArchive& archive, const DistortionSpec& spec, Axis axis,
                                 const std::vector<Rational>& grid);

struct TransformedPoint {
  Rational delta;
  std::size_t l;                          // ceil(log2 b(delta))
  std::size_t bits;                       // g(l)
  std::optional<std::size_t> entropy_l;   // round(n H(delta)), Hamming only
  std::optional<std::size_t> entropy_bits;
};

/// r_x(delta) = g(ceil(log2 b(delta))). Throws Error(MissingGridPoint) when
/// the canonical estimate lacks a required l.
std::vector<TransformedPoint> transform_rate_distortion(const CurveEstimate& g,
                                                        const DistortionSpec& spec,
                                                        const std::vector<Rational>& delta_grid);

// Shapes.

struct ShapeFn {
  std::vector<std::size_t> values;  // g(0..n)
};

/// Uniform member of G_n with g(0) = k: the k unit drops sit at a uniform
/// k-subset of {1..n}.
ShapeFn shape_generate(std::size_t n, std::size_t k, std::uint64_t seed);

struct ShapeCheck {
  bool ok = true;
  std::optional<std::size_t> violation;  // first offending l
};

/// g(n) = 0 and g(l-1) - g(l) in {0, 1} for every l.
ShapeCheck shape_validate(const ShapeFn& g, std::size_t n);

/// Rounded three-phase staircase: g(l) = n - b + a - l up to a =
/// round(nH(1/6)), flat at n - b up to b = round(nH(1/3)), then n - l.
ShapeFn staircase_shape(std::size_t n);

/// Member of G_n built from an estimate: g(n) = 0, and going down,
/// g(l-1) = g(l) + 1 exactly when g(l) < est(l-1).
ShapeFn project_to_shapes(const std::vector<std::size_t>& estimate);

struct BoundsViolation {
  std::size_t l, m;
  long long diff;  // g(l) - g(m)
};

struct BoundsReport {
  double slack = 0;  // c log2 n
  std::vector<BoundsViolation> violations;
  bool endpoint_ok = true;  // g(n) <= c log2 n
  bool ok() const { return violations.empty() && endpoint_ok; }
};

/// Every pair l < m must satisfy -s <= g(l) - g(m) <= m - l + s.
BoundsReport shape_bounds_check(const std::vector<std::size_t>& g, std::size_t n, double c);
/// Same check on a canonical estimate with a point for every l in 0..n.
BoundsReport shape_bounds_check(const CurveEstimate& g, std::size_t n, double c);

/// Values of a canonical estimate indexed by l; throws Error(MissingGridPoint)
/// unless every l in 0..n is present.
std::vector<std::size_t> canonical_values(const CurveEstimate& g, std::size_t n);

}  // namespace ardtk
