#include "ardtk/distortion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ardtk/error.hpp"

namespace ardtk {

namespace {

using i128 = __int128;

void check_length(const DistortionSpec& spec, const BitWord& w, const char* what) {
  if (w.size() != spec.n) fail(ErrorKind::Domain, std::string(what) + " length differs from n");
}

// floor(delta * 2^n), the Euclidean radius on the integer grid.
std::uint64_t grid_radius(std::size_t n, const Rational& delta) {
  const i128 scaled = (i128(delta.num()) << n) / delta.den();
  return static_cast<std::uint64_t>(scaled);
}

std::uint64_t grid_max(std::size_t n) {
  return n == 64 ? UINT64_MAX : (std::uint64_t{1} << n) - 1;
}

std::pair<std::uint64_t, std::uint64_t> euclid_interval(const Ball& ball) {
  const std::uint64_t x = ball.center.to_uint();
  const std::uint64_t k = grid_radius(ball.spec.n, ball.radius);
  const std::uint64_t lo = x >= k ? x - k : 0;
  const std::uint64_t top = grid_max(ball.spec.n);
  const std::uint64_t hi = top - x >= k ? x + k : top;
  return {lo, hi};
}

void check_hamming_radius(const Rational& delta) {
  if (delta < Rational(0) || delta > Rational(1, 2)) {
    fail(ErrorKind::Range, "Hamming radius " + delta.to_string() + " outside [0, 1/2]");
  }
}

}  // namespace

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::Hamming: return "hamming";
    case Family::Euclidean: return "euclid";
    case Family::List: return "list";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "hamming") return Family::Hamming;
  if (name == "euclid" || name == "euclidean") return Family::Euclidean;
  if (name == "list") return Family::List;
  fail(ErrorKind::Usage, "unknown distortion family '" + name + "' (hamming|euclid|list)");
}

void DistortionSpec::validate() const {
  if (n < 1) fail(ErrorKind::Domain, "distortion spec needs n >= 1");
  if (family == Family::Euclidean && n > 62) {
    fail(ErrorKind::Domain, "Euclidean family supports n <= 62");
  }
}

Distance distance(const DistortionSpec& spec, const BitWord& x, const BitWord& y) {
  if (spec.family == Family::List) {
    return distance(spec, x, std::span<const BitWord>(&y, 1));
  }
  spec.validate();
  if (x.size() != spec.n || y.size() != spec.n) return std::nullopt;
  if (spec.family == Family::Hamming) {
    return Rational(static_cast<std::int64_t>(x.hamming(y)), static_cast<std::int64_t>(spec.n));
  }
  const std::uint64_t a = x.to_uint();
  const std::uint64_t b = y.to_uint();
  const std::uint64_t diff = a > b ? a - b : b - a;
  return Rational(static_cast<std::int64_t>(diff), std::int64_t{1} << spec.n);
}

Distance distance(const DistortionSpec& spec, const BitWord& x, std::span<const BitWord> set) {
  if (std::find(set.begin(), set.end(), x) == set.end()) return std::nullopt;
  std::vector<BitWord> distinct(set.begin(), set.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  (void)spec;
  return Rational(static_cast<std::int64_t>(ceil_log2(BigCount(distinct.size()))));
}

Ball make_ball(const DistortionSpec& spec, const BitWord& center, const Rational& radius) {
  spec.validate();
  if (spec.family == Family::List) fail(ErrorKind::Domain, "list balls are built from members");
  check_length(spec, center, "ball center");
  if (spec.family == Family::Hamming) {
    check_hamming_radius(radius);
  } else if (radius < Rational(0) || radius > Rational(1)) {
    fail(ErrorKind::Range, "Euclidean radius " + radius.to_string() + " outside [0, 1]");
  }
  return Ball{spec, center, radius, {}};
}

Ball make_list_ball(std::size_t n, std::vector<BitWord> members) {
  if (members.empty()) fail(ErrorKind::Domain, "list ball needs at least one member");
  for (const auto& m : members) {
    if (m.size() != n) fail(ErrorKind::Domain, "list ball member length differs from n");
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Ball ball;
  ball.spec = {Family::List, n};
  ball.radius = Rational(static_cast<std::int64_t>(ceil_log2(BigCount(members.size()))));
  ball.members = std::move(members);
  return ball;
}

bool contains(const Ball& ball, const BitWord& x) {
  if (ball.spec.family == Family::List) {
    return std::binary_search(ball.members.begin(), ball.members.end(), x);
  }
  const Distance d = distance(ball.spec, x, ball.center);
  return d && *d <= ball.radius;
}

std::size_t radius_flips(std::size_t n, const Rational& delta) {
  return static_cast<std::size_t>((delta * Rational(static_cast<std::int64_t>(n))).floor());
}

BigCount hamming_ball_size(std::size_t n, std::size_t r) {
  BigCount term = 1;
  BigCount total = 0;
  for (std::size_t i = 0; i <= std::min(r, n); ++i) {
    if (i > 0) term = term * (n - i + 1) / i;
    total += term;
  }
  return total;
}

BigCount ball_cardinality(const DistortionSpec& spec, const Rational& delta) {
  spec.validate();
  if (spec.family != Family::Hamming) {
    fail(ErrorKind::Domain, "only Hamming ball sizes are independent of the center");
  }
  check_hamming_radius(delta);
  return hamming_ball_size(spec.n, radius_flips(spec.n, delta));
}

BigCount ball_cardinality(const Ball& ball) {
  switch (ball.spec.family) {
    case Family::Hamming: return ball_cardinality(ball.spec, ball.radius);
    case Family::Euclidean: {
      const auto [lo, hi] = euclid_interval(ball);
      return BigCount(hi - lo) + 1;
    }
    case Family::List: return BigCount(ball.members.size());
  }
  return 0;
}

double log2_big(const BigCount& value) {
  if (value <= 0) return -INFINITY;
  const auto msb = boost::multiprecision::msb(value);
  if (msb < 53) return std::log2(static_cast<double>(value));
  const auto shift = msb - 52;
  const double top = static_cast<double>(BigCount(value >> shift));
  return std::log2(top) + static_cast<double>(shift);
}

std::size_t ceil_log2(const BigCount& value) {
  if (value <= 0) fail(ErrorKind::Domain, "ceil_log2 of a nonpositive count");
  const auto msb = boost::multiprecision::msb(value);
  const bool power = boost::multiprecision::lsb(value) == msb;
  return static_cast<std::size_t>(msb) + (power ? 0 : 1);
}

double binary_entropy(double p) noexcept {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

EntropyBounds entropy_bounds(std::size_t n, const Rational& delta) {
  if (n == 0) fail(ErrorKind::Domain, "entropy bounds need n >= 1");
  check_hamming_radius(delta);
  const double upper = static_cast<double>(n) * binary_entropy(delta.to_double());
  return {upper - std::log2(static_cast<double>(n)) / 2.0 - kEntropyLowerSlack, upper};
}

std::vector<BitWord> ball_members(const Ball& ball, std::size_t limit) {
  const std::size_t n = ball.spec.n;
  if (ball.spec.family == Family::List) {
    if (ball.members.size() > limit) fail(ErrorKind::SizeGuard, "ball exceeds member limit");
    return ball.members;
  }
  if (n > 24) fail(ErrorKind::SizeGuard, "ball enumeration limited to n <= 24");
  if (ball_cardinality(ball) > limit) fail(ErrorKind::SizeGuard, "ball exceeds member limit");

  std::vector<BitWord> out;
  if (ball.spec.family == Family::Euclidean) {
    const auto [lo, hi] = euclid_interval(ball);
    for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(BitWord::from_uint(v, n));
    return out;
  }
  const std::size_t r = radius_flips(n, ball.radius);
  const std::uint64_t c = ball.center.to_uint();
  std::vector<std::uint64_t> values;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) <= r) values.push_back(c ^ mask);
  }
  std::sort(values.begin(), values.end());
  out.reserve(values.size());
  for (auto v : values) out.push_back(BitWord::from_uint(v, n));
  return out;
}

Rational radius_for_log_cardinality(const DistortionSpec& spec, std::size_t l) {
  spec.validate();
  if (l > spec.n) fail(ErrorKind::Domain, "log-cardinality exceeds n");
  const auto n = static_cast<std::int64_t>(spec.n);
  switch (spec.family) {
    case Family::Hamming: {
      const std::size_t top = spec.n / 2;
      BigCount term = 1, total = 0;
      for (std::size_t i = 0; i <= top; ++i) {
        if (i > 0) term = term * (spec.n - i + 1) / i;
        total += term;
        if (ceil_log2(total) >= l) return Rational(static_cast<std::int64_t>(i), n);
      }
      return Rational(static_cast<std::int64_t>(top), n);
    }
    case Family::Euclidean: {
      // Interior size 2k + 1 needs ceil(log2(2k+1)) >= l, i.e. 2k + 1 > 2^(l-1).
      if (l == 0) return Rational(0);
      const std::int64_t k = l == 1 ? 1 : std::int64_t{1} << (l - 2);
      return Rational(k, std::int64_t{1} << spec.n);
    }
    case Family::List: return Rational(static_cast<std::int64_t>(l));
  }
  return Rational(0);
}

std::size_t log_cardinality(const DistortionSpec& spec, const Rational& delta) {
  switch (spec.family) {
    case Family::Hamming: return ceil_log2(ball_cardinality(spec, delta));
    case Family::Euclidean: {
      const BigCount interior = BigCount(grid_radius(spec.n, delta)) * 2 + 1;
      return std::min(ceil_log2(interior), spec.n);
    }
    case Family::List: return static_cast<std::size_t>(std::max<std::int64_t>(0, delta.ceil()));
  }
  return 0;
}

}  // namespace ardtk
