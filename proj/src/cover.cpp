#include "ardtk/cover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

#include "ardtk/distortion.hpp"
#include "ardtk/error.hpp"
#include "ardtk/random.hpp"

namespace ardtk {

namespace {

using Word = std::uint32_t;

// Every n-bit mask of popcount exactly w, increasing (Gosper's hack).
template <typename F>
void for_each_weight(std::size_t n, std::size_t w, F&& f) {
  if (w > n) return;
  if (w == 0) {
    f(Word{0});
    return;
  }
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::uint64_t v = (std::uint64_t{1} << w) - 1;
  while (v < limit) {
    f(static_cast<Word>(v));
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
}

std::vector<Word> masks_up_to(std::size_t n, std::size_t r) {
  std::vector<Word> out;
  for (std::size_t w = 0; w <= std::min(r, n); ++w) {
    for_each_weight(n, w, [&](Word m) { out.push_back(m); });
  }
  return out;
}

Word random_weight_mask(Rng& rng, std::size_t n, std::size_t k) {
  // Partial Fisher-Yates over positions.
  std::uint8_t pos[32];
  for (std::size_t i = 0; i < n; ++i) pos[i] = static_cast<std::uint8_t>(i);
  Word m = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pos[i], pos[i + rng.below(n - i)]);
    m |= Word{1} << pos[i];
  }
  return m;
}

Word to_word(const BitWord& w) { return static_cast<Word>(w.to_uint()); }

void check_size(std::size_t n) {
  if (n < 1 || n > 24) fail(ErrorKind::SizeGuard, "covers are built and verified for 1 <= n <= 24");
}

std::vector<std::uint8_t> target_bitmap(std::size_t n, const CoverTarget& target) {
  std::vector<std::uint8_t> in(std::size_t{1} << n, 0);
  if (target.whole_cube) {
    std::fill(in.begin(), in.end(), 1);
    return in;
  }
  if (target.center.size() != n) fail(ErrorKind::Domain, "cover target center length differs from n");
  const Word y = to_word(target.center);
  for (Word m : masks_up_to(n, radius_flips(n, target.radius))) in[y ^ m] = 1;
  return in;
}

struct Candidate {
  Word word;
  std::size_t shell;  // index into the shell stats, or SIZE_MAX for a seed center
};

// Greedy selection by uncovered gain (ties toward the earlier candidate),
// then removal of centers made redundant by later picks.
std::vector<Candidate> prune(std::size_t n, const std::vector<std::uint8_t>& in,
                             std::vector<Candidate> pool, std::size_t s) {
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Candidate& a, const Candidate& b) { return a.word < b.word; });
  pool.erase(std::unique(pool.begin(), pool.end(),
                         [](const Candidate& a, const Candidate& b) { return a.word == b.word; }),
             pool.end());
  const auto masks = masks_up_to(n, s);
  std::vector<std::uint8_t> covered(in.size(), 0);
  std::size_t remaining = static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));

  auto gain = [&](Word c) {
    std::size_t g = 0;
    for (Word m : masks) {
      const Word w = c ^ m;
      if (in[w] && !covered[w]) ++g;
    }
    return g;
  };
  using Entry = std::pair<std::size_t, std::size_t>;  // (gain, index)
  auto worse = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t i = 0; i < pool.size(); ++i) heap.emplace(gain(pool[i].word), i);

  std::vector<std::size_t> chosen;
  while (remaining > 0 && !heap.empty()) {
    auto [g, i] = heap.top();
    heap.pop();
    const std::size_t fresh = gain(pool[i].word);
    if (fresh == 0) continue;
    if (fresh < g && !heap.empty() && worse(Entry{fresh, i}, heap.top())) {
      heap.emplace(fresh, i);
      continue;
    }
    chosen.push_back(i);
    for (Word m : masks) {
      const Word w = pool[i].word ^ m;
      if (in[w] && !covered[w]) {
        covered[w] = 1;
        --remaining;
      }
    }
  }
  if (remaining > 0) fail(ErrorKind::RetryExhausted, "candidate pool does not cover the target");

  std::vector<std::uint32_t> count(in.size(), 0);
  for (auto i : chosen) {
    for (Word m : masks) ++count[pool[i].word ^ m];
  }
  std::vector<Candidate> kept;
  std::vector<bool> drop(chosen.size(), false);
  for (std::size_t j = chosen.size(); j-- > 0;) {
    const Word c = pool[chosen[j]].word;
    bool redundant = true;
    for (Word m : masks) {
      if (in[c ^ m] && count[c ^ m] < 2) {
        redundant = false;
        break;
      }
    }
    if (redundant) {
      drop[j] = true;
      for (Word m : masks) --count[c ^ m];
    }
  }
  for (std::size_t j = 0; j < chosen.size(); ++j) {
    if (!drop[j]) kept.push_back(pool[chosen[j]]);
  }
  return kept;
}

std::vector<BitWord> to_words(std::size_t n, const std::vector<Candidate>& kept) {
  std::vector<BitWord> out;
  out.reserve(kept.size());
  for (const auto& c : kept) out.push_back(BitWord::from_uint(c.word, n));
  std::sort(out.begin(), out.end());
  return out;
}

Rational grid(std::size_t i, std::size_t n) {
  return Rational(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n));
}

// Candidates for B(y, r/n) with radius s/n, every shell verified.
std::vector<Candidate> sample_shells(std::size_t n, std::size_t r, std::size_t s, Word y,
                                     std::uint64_t seed, const CoverParams& params,
                                     std::vector<ShellStat>& stats, unsigned& retries) {
  std::vector<Candidate> pool{{y, SIZE_MAX}};
  if (s >= r) return pool;

  BigCount scale = 1;
  for (unsigned i = 0; i <= params.c; ++i) scale *= n;
  const BigCount big = hamming_ball_size(n, r);
  const BigCount small = hamming_ball_size(n, s);
  const BigCount per_shell_big = (scale * big + small - 1) / small;
  if (per_shell_big > BigCount(std::uint64_t{1} << 26)) {
    fail(ErrorKind::SizeGuard, "shell sample count exceeds 2^26");
  }
  const auto per_shell = static_cast<std::size_t>(per_shell_big);
  const auto masks = masks_up_to(n, s);
  std::vector<std::uint32_t> stamp(std::size_t{1} << n, 0);
  std::uint32_t epoch = 0;

  for (std::size_t D = s + 1; D <= r; ++D) {
    ShellStat st;
    st.shell = grid(D, n);
    st.offset = shell_offset(grid(s, n), st.shell, n);
    st.sampled = per_shell;
    const std::size_t k = radius_flips(n, st.offset);
    std::vector<Word> sample(per_shell);
    bool ok = false;
    for (unsigned a = 0; a < params.max_attempts && !ok; ++a) {
      ++st.attempts;
      Rng rng(derive_seed(derive_seed(seed, D), a));
      ++epoch;
      for (auto& w : sample) {
        w = y ^ random_weight_mask(rng, n, k);
        for (Word m : masks) stamp[w ^ m] = epoch;
      }
      ok = true;
      for_each_weight(n, D, [&](Word m) {
        if (stamp[y ^ m] != epoch) ok = false;
      });
    }
    if (!ok) {
      fail(ErrorKind::RetryExhausted, "shell " + st.shell.to_string() + " not covered after " +
                                          std::to_string(params.max_attempts) + " attempts");
    }
    retries += st.attempts - 1;
    for (Word w : sample) pool.push_back({w, stats.size()});
    stats.push_back(st);
  }
  return pool;
}

void check_params(const CoverParams& params) {
  if (params.max_attempts < 1) fail(ErrorKind::Domain, "cover needs at least one attempt per shell");
}

void check_radii(const Rational& d, const Rational& delta) {
  if (d < Rational(0) || d > delta || delta > Rational(1, 2)) {
    fail(ErrorKind::Domain, "cover needs 0 <= d <= delta <= 1/2");
  }
}

void finish(CoverResult& out, std::size_t n, const std::vector<Candidate>& kept) {
  for (const auto& c : kept) {
    if (c.shell != SIZE_MAX) ++out.shells[c.shell].kept;
  }
  out.centers = to_words(n, kept);
  const auto check = verify_cover(n, out.target, out.centers, out.small_radius);
  if (!check.ok) fail(ErrorKind::RetryExhausted, "constructed cover failed verification");
}

}  // namespace

Rational shell_offset(const Rational& d, const Rational& shell, std::size_t n) {
  if (n < 1) fail(ErrorKind::Domain, "shell_offset needs n >= 1");
  if (d < Rational(0) || d >= shell || shell > Rational(1, 2)) {
    fail(ErrorKind::Domain, "shell_offset needs 0 <= d < D <= 1/2");
  }
  const Rational f = (shell - d) / (Rational(1) - Rational(2) * d);
  const Rational scaled = f * Rational(static_cast<std::int64_t>(n));
  std::int64_t i = scaled.floor();
  // Round half down: move up only when strictly past the midpoint.
  if (scaled - Rational(i) > Rational(1, 2)) ++i;
  return Rational(i, static_cast<std::int64_t>(n));
}

CoverResult cover_ball(std::size_t n, const Rational& delta, const Rational& d, std::uint64_t seed,
                       const CoverParams& params, std::optional<BitWord> center) {
  check_size(n);
  check_params(params);
  check_radii(d, delta);
  const BitWord y = center ? *center : zeros(n);
  if (y.size() != n) fail(ErrorKind::Domain, "cover center length differs from n");

  CoverResult out;
  out.target = CoverTarget::ball(y, delta);
  out.small_radius = d;
  out.seed = seed;
  const std::size_t r = radius_flips(n, delta);
  const std::size_t s = radius_flips(n, d);
  auto pool = sample_shells(n, r, s, to_word(y), seed, params, out.shells, out.retries_used);
  finish(out, n, prune(n, target_bitmap(n, out.target), std::move(pool), s));
  return out;
}

CoverResult cover_space(std::size_t n, const Rational& d, std::uint64_t seed,
                        const CoverParams& params) {
  check_size(n);
  check_params(params);
  check_radii(d, Rational(1, 2));
  const std::size_t s = radius_flips(n, d);
  const std::size_t r = n / 2;

  CoverResult out;
  out.target = CoverTarget::cube();
  out.small_radius = d;
  out.seed = seed;
  auto pool = sample_shells(n, r, s, 0, derive_seed(seed, 0), params, out.shells, out.retries_used);
  auto upper = sample_shells(n, r, s, to_word(ones(n)), derive_seed(seed, 1), params, out.shells,
                             out.retries_used);
  pool.insert(pool.end(), upper.begin(), upper.end());
  finish(out, n, prune(n, target_bitmap(n, out.target), std::move(pool), s));
  return out;
}

CoverCheck verify_cover(std::size_t n, const CoverTarget& target,
                        const std::vector<BitWord>& centers, const Rational& d) {
  check_size(n);
  const auto in = target_bitmap(n, target);
  const std::size_t s = radius_flips(n, d);
  std::vector<Word> cs;
  for (const auto& c : centers) {
    if (c.size() == n) cs.push_back(to_word(c));
  }
  const std::size_t target_size = static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
  std::vector<std::uint8_t> covered(in.size(), 0);
  if (hamming_ball_size(n, s) <= target_size) {
    const auto masks = masks_up_to(n, s);
    for (Word c : cs) {
      for (Word m : masks) covered[c ^ m] = 1;
    }
  } else {
    for (std::size_t w = 0; w < in.size(); ++w) {
      if (!in[w]) continue;
      for (Word c : cs) {
        if (static_cast<std::size_t>(std::popcount(static_cast<Word>(w) ^ c)) <= s) {
          covered[w] = 1;
          break;
        }
      }
    }
  }
  for (std::size_t w = 0; w < in.size(); ++w) {
    if (in[w] && !covered[w]) return {false, BitWord::from_uint(w, n)};
  }
  return {true, std::nullopt};
}

double cover_size_bound(std::size_t n, double target_size, const Rational& d) {
  const double b = static_cast<double>(hamming_ball_size(n, radius_flips(n, d)));
  return std::pow(static_cast<double>(n), 5) * target_size / b;
}

}  // namespace ardtk
