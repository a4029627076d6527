// End-to-end acceptance suite: one PASS/FAIL line per criterion.
//
// Every tolerance, seed, budget and time limit is pinned below. Oracles are
// computed here from first principles (binomial sums, brute-force scans,
// closed forms) rather than through the library routine under test.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ardtk/codec.hpp"
#include "ardtk/cover.hpp"
#include "ardtk/denoise.hpp"
#include "ardtk/distortion.hpp"
#include "ardtk/game.hpp"
#include "ardtk/random.hpp"
#include "ardtk/rdsearch.hpp"
#include "ardtk/shannon.hpp"

using namespace ardtk;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double h2(double p) { return p <= 0 || p >= 1 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

double choose(std::size_t n, std::size_t k) {
  double c = 1;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// b(r/n) as sum_{i<=r} C(n, i), exact in double for n <= 50.
double ball_size(std::size_t n, std::size_t r) {
  double s = 0;
  for (std::size_t i = 0; i <= r; ++i) s += choose(n, i);
  return s;
}

Rational frac(std::size_t a, std::size_t b) { return Rational(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)); }

std::size_t hamming(std::uint64_t a, std::uint64_t b) { return static_cast<std::size_t>(std::popcount(a ^ b)); }

std::uint64_t to_uint(const BitWord& w) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < w.size(); ++i) v = (v << 1) | (w[i] ? 1u : 0u);
  return v;
}

// 1. Codec round trip and counting ------------------------------------------

constexpr std::size_t kRoundTrips = 10000;
constexpr std::size_t kMaxRoundTripLength = 4096;

Outcome codec_criterion() {
  Outcome out;
  Rng rng(0xc0dec);
  std::size_t compressed_mode = 0;
  for (std::size_t t = 0; t < kRoundTrips && out.pass; ++t) {
    const std::size_t n = rng.below(kMaxRoundTripLength + 1);
    // Mix dense random words with sparse and run-structured ones so both
    // codeword modes are exercised.
    BitWord x;
    const std::uint64_t style = rng.below(3);
    const std::uint64_t density = 1 + rng.below(31);
    bool run_bit = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (style == 0) x.push_back(rng.below(2) == 1);
      else if (style == 1) x.push_back(rng.below(64) < density);
      else {
        if (rng.below(64) < density) run_bit = !run_bit;
        x.push_back(run_bit);
      }
    }
    const auto c = codec::compress(x);
    if (c.size() < n) ++compressed_mode;
    out.require(codec::decompress(c) == x, fmt("round trip failed at trial %zu (n=%zu)", t, n));
    out.require(c.size() == codec::codelength(x), fmt("codelength disagrees with compress at trial %zu", t));
  }

  constexpr std::size_t n = 12;
  std::vector<std::size_t> shorter(n + 1, 0);  // shorter[l] = #{x : L(x) < l}
  for (std::uint64_t v = 0; v < (1u << n); ++v) {
    const auto len = codec::codelength(BitWord::from_uint(v, n));
    for (std::size_t l = 0; l <= n; ++l) shorter[l] += len < l ? 1 : 0;
  }
  for (std::size_t l = 0; l <= n; ++l) {
    out.require(shorter[l] < (std::size_t{1} << l), fmt("%zu words of length 12 code below %zu bits", shorter[l], l));
  }
  if (out.pass) out.detail = fmt("%zu round trips (%zu compressed), counting holds for l <= 12", kRoundTrips, compressed_mode);
  return out;
}

// 2. Blahut-Arimoto against the closed form ---------------------------------

constexpr double kBaTolerance = 1e-4;

Outcome shannon_criterion() {
  Outcome out;
  const auto src = SourceModel::bernoulli(Rational(1, 2), 1);
  double worst = 0;
  for (int i = 1; i <= 9; ++i) {
    const double delta = 0.05 * i;
    const auto pt = blahut_arimoto(src, hamming_matrix(2), delta);
    const double err = std::abs(pt.rate - (1 - h2(delta)));
    worst = std::max(worst, err);
    out.require(err <= kBaTolerance, fmt("delta=%.2f: |R_BA - (1-H)| = %.3g", delta, err));
  }
  if (out.pass) out.detail = fmt("max |R_BA - (1-H(delta))| = %.3g over delta = 0.05..0.45", worst);
  return out;
}

// 3. Covering ------------------------------------------------------------------

constexpr std::size_t kCoverMaxN = 12;
constexpr std::uint64_t kCoverSeed = 2024;

// Independent exhaustive membership scan.
bool covers(std::size_t n, std::optional<std::pair<std::uint64_t, std::size_t>> ball,
            const std::vector<BitWord>& centers, std::size_t d) {
  std::vector<std::uint64_t> cs;
  for (const auto& c : centers) cs.push_back(to_uint(c));
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    if (ball && hamming(v, ball->first) > ball->second) continue;
    if (std::none_of(cs.begin(), cs.end(), [&](std::uint64_t c) { return hamming(v, c) <= d; })) return false;
  }
  return true;
}

Outcome cover_criterion() {
  Outcome out;
  std::size_t cases = 0;
  double worst_ratio = 0;  // size / upper bound
  for (std::size_t n = 1; n <= kCoverMaxN && out.pass; ++n) {
    const double alpha = std::pow(static_cast<double>(n), 5);
    for (std::size_t dr = 0; dr <= n / 2 && out.pass; ++dr) {
      const Rational d = frac(dr, n);
      for (std::size_t big = dr; big <= n / 2; ++big) {
        const auto r = cover_ball(n, frac(big, n), d, derive_seed(kCoverSeed, 1000 * n + 31 * big + dr));
        const double bound = alpha * ball_size(n, big) / ball_size(n, dr);
        const double lower = std::ceil(ball_size(n, big) / ball_size(n, dr));
        const auto c0 = r.target.center.empty() ? std::uint64_t{0} : to_uint(r.target.center);
        out.require(covers(n, std::pair{c0, big}, r.centers, dr), fmt("cover_ball n=%zu delta=%zu/%zu d=%zu/%zu misses a word", n, big, n, dr, n));
        out.require(static_cast<double>(r.centers.size()) <= bound, fmt("cover_ball n=%zu delta=%zu/%zu d=%zu/%zu has %zu > n^5 b/b", n, big, n, dr, n, r.centers.size()));
        out.require(static_cast<double>(r.centers.size()) >= lower, fmt("cover_ball below the volume bound at n=%zu", n));
        worst_ratio = std::max(worst_ratio, static_cast<double>(r.centers.size()) / bound);
        ++cases;
      }
      const auto s = cover_space(n, d, derive_seed(kCoverSeed, 7 * n + dr));
      const double cube = std::ldexp(1.0, static_cast<int>(n));
      const double lower = std::ceil(cube / ball_size(n, dr));
      const double upper = alpha * cube / ball_size(n, dr);
      const double size = static_cast<double>(s.centers.size());
      out.require(covers(n, std::nullopt, s.centers, dr), fmt("cover_space n=%zu d=%zu/%zu misses a word", n, dr, n));
      out.require(size >= lower && size <= upper, fmt("cover_space n=%zu d=%zu/%zu size %zu outside [%.0f, %.3g]", n, dr, n, s.centers.size(), lower, upper));
      ++cases;
    }
  }
  if (out.pass) out.detail = fmt("%zu constructions verified exhaustively, max size/bound = %.3g", cases, worst_ratio);
  return out;
}

// 4. Game ------------------------------------------------------------------------

constexpr std::size_t kGamesPerAdversary = 1000;
constexpr std::size_t kProbSeeds = 200;
constexpr double kProbPassFraction = 0.40;
const GameParams kProbParams{2, 8, 3};

// Replays a transcript and checks after every move that each element seen
// in at least 2^m of Alice's sets lies in some marked set.
bool wins_every_move(const GameTranscript& tr, const GameParams& p) {
  const std::size_t u = std::size_t{1} << p.n;
  std::vector<std::uint64_t> occurrences(u, 0);
  std::vector<bool> covered(u, false);
  std::vector<const ElementSet*> history;
  for (const auto& mv : tr.moves) {
    history.push_back(&mv.alice);
    for (auto e : mv.alice) ++occurrences[e];
    for (auto idx : mv.marks) {
      if (idx >= history.size()) return false;
      for (auto e : *history[idx]) covered[e] = true;
    }
    for (std::size_t e = 0; e < u; ++e) {
      if (occurrences[e] >= p.threshold() && !covered[e]) return false;
    }
  }
  return true;
}

Outcome game_criterion() {
  Outcome out;
  const std::vector<AdversaryKind> kinds{AdversaryKind::Random, AdversaryKind::Repeat, AdversaryKind::Balls,
                                         AdversaryKind::Adaptive};
  std::size_t moves = 0;
  for (auto kind : kinds) {
    Rng pick(derive_seed(0x9a3e, static_cast<std::uint64_t>(kind)));
    for (std::size_t g = 0; g < kGamesPerAdversary && out.pass; ++g) {
      GameParams p{1 + pick.below(6), static_cast<unsigned>(1 + pick.below(8)), 0};
      p.m = static_cast<unsigned>(pick.below(std::min(p.k, 3u) + 1));
      auto alice = make_adversary(kind, p, derive_seed(g, 17));
      const auto tr = play_game(*alice, p, Strategy::Deterministic);
      moves += tr.moves.size();
      const std::string where = fmt("%s game %zu (n=%zu k=%u m=%u)", to_string(kind), g, p.n, p.k, p.m);
      out.require(wins_every_move(tr, p), where + ": heavy element uncovered");
      out.require(tr.total_marks() <= mark_bound(p), where + ": marks exceed mark_bound");
      for (std::size_t t = 0; t < tr.moves.size(); ++t) {
        const auto& mv = tr.moves[t];
        const unsigned j = static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(t + 1)));
        const double cap = std::ceil(std::ldexp(1.0, static_cast<int>(j) - static_cast<int>(p.m)) * p.k *
                                     static_cast<double>(p.n) * std::log(2.0));
        out.require(mv.block_exponent == j, where + ": wrong block exponent");
        out.require(static_cast<double>(mv.passes) <= cap, where + fmt(": e_%u = %zu above cap", j, mv.passes));
      }
    }
  }

  std::vector<std::size_t> joint;
  const double mark_cap = 2 * mark_probability(kProbParams) * std::ldexp(1.0, static_cast<int>(kProbParams.k));
  for (auto kind : kinds) {
    std::size_t ok = 0;
    for (std::size_t s = 0; s < kProbSeeds; ++s) {
      auto alice = make_adversary(kind, kProbParams, derive_seed(s, 23));
      const auto tr = play_game(*alice, kProbParams, Strategy::Probabilistic, s);
      if (wins_every_move(tr, kProbParams) && static_cast<double>(tr.total_marks()) <= mark_cap) ++ok;
    }
    joint.push_back(ok);
    out.require(static_cast<double>(ok) >= kProbPassFraction * kProbSeeds,
                fmt("probabilistic vs %s: %zu/%zu joint successes", to_string(kind), ok, kProbSeeds));
  }
  if (out.pass) {
    out.detail = fmt("%zu deterministic moves checked; probabilistic joint successes %zu/%zu/%zu/%zu of %zu", moves,
                     joint[0], joint[1], joint[2], joint[3], kProbSeeds);
  }
  return out;
}

// 5. Curves against brute force ------------------------------------------------

constexpr std::size_t kOracleWords = 20;

Outcome oracle_criterion() {
  Outcome out;
  constexpr std::size_t n = 12;
  const DistortionSpec spec{Family::Hamming, n};
  std::vector<std::size_t> cube_bits(std::size_t{1} << n);
  std::size_t max_bits = 0;
  for (std::uint64_t v = 0; v < cube_bits.size(); ++v) {
    cube_bits[v] = codec::codelength(BitWord::from_uint(v, n));
    max_bits = std::max(max_bits, cube_bits[v]);
  }
  std::vector<Rational> deltas;
  for (std::size_t i = 0; i <= n / 2; ++i) deltas.push_back(frac(i, n));
  std::vector<std::size_t> rates, ls;
  for (std::size_t r = 0; r <= max_bits; ++r) rates.push_back(r);
  for (std::size_t l = 0; l <= n; ++l) ls.push_back(l);

  SearchParams p;
  p.budget = std::size_t{1} << n;
  Rng rng(0x0c1e);
  for (std::size_t t = 0; t < kOracleWords && out.pass; ++t) {
    const auto xw = random_word(rng, n);
    const auto x = to_uint(xw);
    p.seed = derive_seed(5, t);
    auto min_rate_within = [&](std::size_t flips) {
      std::size_t best = SIZE_MAX;
      for (std::uint64_t v = 0; v < cube_bits.size(); ++v) {
        if (hamming(v, x) <= flips) best = std::min(best, cube_bits[v]);
      }
      return best;
    };
    const auto rd = rate_distortion_curve(xw, spec, deltas, p);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      out.require(rd.points[i].bits == min_rate_within(i), fmt("word %zu: r_x(%zu/12) differs", t, i));
    }
    const auto dr = distortion_rate_curve(xw, spec, rates, p);
    for (std::size_t r : rates) {
      std::optional<std::size_t> best;
      for (std::uint64_t v = 0; v < cube_bits.size(); ++v) {
        if (cube_bits[v] <= r && (!best || hamming(v, x) < *best)) best = hamming(v, x);
      }
      const auto& got = dr.points[r].distortion;
      const bool same = best ? got && *got == frac(*best, n) : !got;
      out.require(same, fmt("word %zu: d_x(%zu) differs", t, r));
    }
    const auto g = canonical_estimate(xw, spec, ls, p);
    for (std::size_t l : ls) {
      // Smallest radius with ceil(log2 b) >= l, i.e. b > 2^(l-1), capped at 1/2.
      std::size_t flips = 0;
      while (l > 0 && flips < n / 2 && ball_size(n, flips) <= std::ldexp(1.0, static_cast<int>(l) - 1)) ++flips;
      out.require(g.points[l].bits == min_rate_within(flips), fmt("word %zu: g_x(%zu) differs", t, l));
    }
  }
  if (out.pass) out.detail = fmt("%zu words x (7 + %zu + 13) grid points match the 2^12 scan", kOracleWords, rates.size());
  return out;
}

// 6. Shapes ----------------------------------------------------------------------

constexpr std::size_t kShapes = 100;
constexpr double kShapeSlackC = 8.0;
constexpr std::size_t kShapeWords = 10;
constexpr std::size_t kShapeBudget = 20000;

// Pairs l < m violating -s <= g(l) - g(m) <= m - l + s, plus g(n) <= s.
std::size_t bound_violations(const std::vector<std::size_t>& g, double s) {
  const std::size_t n = g.size() - 1;
  std::size_t bad = static_cast<double>(g[n]) <= s ? 0 : 1;
  for (std::size_t l = 0; l <= n; ++l) {
    for (std::size_t m = l + 1; m <= n; ++m) {
      const double diff = static_cast<double>(g[l]) - static_cast<double>(g[m]);
      if (diff < -s || diff > static_cast<double>(m - l) + s) ++bad;
    }
  }
  return bad;
}

std::vector<std::size_t> values_of(const CurveEstimate& c) {
  std::vector<std::size_t> v;
  for (const auto& pt : c.points) v.push_back(*pt.bits);
  return v;
}

Outcome shape_criterion() {
  Outcome out;
  Rng rng(0x5a9e);
  for (std::size_t t = 0; t < kShapes; ++t) {
    const std::size_t n = 1 + rng.below(128);
    const std::size_t k = rng.below(n + 1);
    const auto g = shape_generate(n, k, derive_seed(77, t));
    bool member = g.values.size() == n + 1 && g.values[0] == k && g.values[n] == 0;
    for (std::size_t l = 1; member && l <= n; ++l) member = g.values[l - 1] == g.values[l] || g.values[l - 1] == g.values[l] + 1;
    out.require(member, fmt("generated shape %zu (n=%zu k=%zu) is not in G_n", t, n, k));
    out.require(shape_validate(g, n).ok, fmt("shape_validate rejects generated shape %zu", t));
  }

  // Ratify c at n = 12, where the exhaustive search gives the exact proxy curve.
  std::size_t ratify_bad = 0;
  {
    constexpr std::size_t n = 12;
    std::vector<std::size_t> ls;
    for (std::size_t l = 0; l <= n; ++l) ls.push_back(l);
    SearchParams p;
    p.budget = std::size_t{1} << n;
    Rng wr(0x12);
    for (std::size_t t = 0; t < kShapeWords; ++t) {
      const auto g = canonical_estimate(random_word(wr, n), DistortionSpec{Family::Hamming, n}, ls, p, kShapeSlackC);
      out.require(g.exhaustive, "n=12 canonical estimate was not exhaustive");
      ratify_bad += bound_violations(values_of(g), kShapeSlackC * std::log2(12.0));
    }
    out.require(ratify_bad == 0, fmt("c=8 fails against the exact n=12 curves (%zu violations)", ratify_bad));
  }

  constexpr std::size_t n = 64;
  const double s = kShapeSlackC * std::log2(static_cast<double>(n));
  std::vector<std::size_t> ls;
  for (std::size_t l = 0; l <= n; ++l) ls.push_back(l);
  Rng wr(0x64);
  std::size_t worst_end = 0;
  for (std::size_t t = 0; t < kShapeWords; ++t) {
    SearchParams p;
    p.budget = kShapeBudget;
    p.seed = derive_seed(64, t);
    const auto g = canonical_estimate(random_word(wr, n), DistortionSpec{Family::Hamming, n}, ls, p, kShapeSlackC);
    const auto v = values_of(g);
    worst_end = std::max(worst_end, v.back());
    const auto bad = bound_violations(v, s);
    out.require(bad == 0, fmt("word %zu at n=64: %zu bound violations at c=8", t, bad));
    out.require(shape_bounds_check(g, n, kShapeSlackC).ok() == (bad == 0), "library bounds check disagrees with the scan");
  }
  if (out.pass) out.detail = fmt("%zu shapes in G_n; c=8 holds at n=12 (exact) and n=64 (max g(n)=%zu <= %.0f)", kShapes, worst_end, s);
  return out;
}

// 7. Denoising --------------------------------------------------------------------

constexpr std::size_t kDenoiseSide = 32;
constexpr std::size_t kDenoiseSeeds = 10;
constexpr std::size_t kDenoiseBudget = 200000;
constexpr double kDenoiseMaxFraction = 0.03;
constexpr std::size_t kDenoiseMinGoodRuns = 8;
constexpr double kKneeTolerance = 0.10;

Outcome denoise_criterion() {
  Outcome out;
  std::size_t good = 0, knee_ok = 0;
  std::string knees;
  const std::size_t n = kDenoiseSide * kDenoiseSide;
  for (std::uint64_t seed = 1; seed <= kDenoiseSeeds; ++seed) {
    const auto cross = make_noisy_cross(kDenoiseSide, Rational(1, 10), seed);
    DenoiseParams p;
    p.search.budget = kDenoiseBudget;
    p.search.seed = seed;
    const auto r = denoise(cross.noisy.pixels, DistortionSpec{Family::Hamming, n}, p);

    const std::size_t dclean = (r.denoised ^ cross.clean.pixels).popcount();
    if (static_cast<double>(dclean) / static_cast<double>(n) <= kDenoiseMaxFraction) ++good;

    bool monotone = true;
    std::optional<Rational> prev;
    std::optional<std::size_t> best_clean;
    std::size_t clean_rate = 0;
    for (const auto& pt : r.curve.points) {
      if (!pt.distortion) continue;
      if (prev && *pt.distortion > *prev) monotone = false;
      prev = *pt.distortion;
      const std::size_t w = (pt.destination ^ cross.clean.pixels).popcount();
      if (!best_clean || w < *best_clean) {
        best_clean = w;
        clean_rate = static_cast<std::size_t>(pt.axis_value.floor());
      }
    }
    out.require(monotone, fmt("seed %llu: distortion-to-noisy curve increases", static_cast<unsigned long long>(seed)));
    const double off = std::abs(static_cast<double>(r.knee.rate) - static_cast<double>(clean_rate));
    const bool within = off <= kKneeTolerance * static_cast<double>(clean_rate);
    knee_ok += within ? 1 : 0;
    knees += fmt(" %llu:%zu/%zu/%zu", static_cast<unsigned long long>(seed), r.knee.rate, clean_rate, dclean);
  }
  out.require(good >= kDenoiseMinGoodRuns, fmt("only %zu/%zu runs within 3%% of the clean image", good, kDenoiseSeeds));
  out.require(knee_ok == kDenoiseSeeds, fmt("knee within 10%% of the clean minimizer in %zu/%zu runs", knee_ok, kDenoiseSeeds));
  out.detail += fmt(" [good %zu/%zu; seed:knee/clean-minimizer/dclean%s]", good, kDenoiseSeeds, knees.c_str());
  return out;
}

// 8. Majority counting ------------------------------------------------------------

constexpr std::size_t kMajorityN = 10;

Outcome majority_criterion() {
  Outcome out;
  constexpr std::size_t n = kMajorityN;
  const DistortionSpec spec{Family::Hamming, n};
  std::size_t balls = 0, checks = 0;
  for (std::size_t r = 0; r * 10 <= 3 * n; ++r) {
    const double log_size = std::log2(ball_size(n, r));
    for (std::uint64_t c = 0; c < (1u << n) && out.pass; ++c) {
      const Ball ball = make_ball(spec, BitWord::from_uint(c, n), frac(r, n));
      const BitWord desc = ball_descriptor(ball);
      std::vector<double> shortfall;  // log|B| - L(x|B) per member
      for (std::uint64_t v = 0; v < (1u << n); ++v) {
        if (hamming(v, c) > r) continue;
        shortfall.push_back(log_size - static_cast<double>(codec::conditional_codelength(BitWord::from_uint(v, n), desc)));
      }
      // The count only changes at the shortfalls, so checking beta at each of
      // them (and at 0) covers every beta >= 0.
      std::vector<double> betas{0.0};
      for (double s : shortfall) {
        if (s >= 0) betas.push_back(s);
      }
      std::sort(betas.begin(), betas.end());
      betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
      const auto lib = majority_property_sweep(ball, betas);
      for (std::size_t i = 0; i < betas.size(); ++i) {
        const double beta = betas[i];
        const auto count = static_cast<std::size_t>(std::count_if(shortfall.begin(), shortfall.end(), [&](double s) { return s > beta; }));
        const bool ok = count == 0 || static_cast<double>(count) < std::exp2(log_size - beta);
        out.require(ok, fmt("center %llu radius %zu/10 beta %.3f: %zu members vs bound %.3g", static_cast<unsigned long long>(c), r, beta, count, std::exp2(log_size - beta)));
        out.require(lib[i].count == count, "library count disagrees with the scan");
        ++checks;
      }
      ++balls;
    }
  }
  if (out.pass) out.detail = fmt("%zu balls, %zu (ball, beta) checks", balls, checks);
  return out;
}

// 9. Comparison report ------------------------------------------------------------

constexpr double kReportSlack = 24;
constexpr std::size_t kReportBudget64 = 20000;

Outcome comparison_criterion() {
  Outcome out;
  double worst_margin = 1e300;
  for (std::size_t n : {12, 64}) {
    const DistortionSpec spec{Family::Hamming, n};
    std::vector<Rational> grid;
    for (std::size_t i = 0; i <= n / 2; ++i) grid.push_back(frac(i, n));
    ComparisonParams cp;
    cp.slack = kReportSlack;
    cp.search.budget = n == 12 ? std::size_t{1} << n : kReportBudget64;
    cp.search.seed = 6;
    const auto rep = expected_rate_comparison(SourceModel::bernoulli(Rational(1, 2), n), spec, grid, cp);
    out.require(rep.rows.size() == grid.size() && rep.sample_curves.size() == cp.samples, fmt("n=%zu report is incomplete", n));
    for (std::size_t s = 0; s < rep.sample_curves.size(); ++s) {
      const auto& c = rep.sample_curves[s];
      out.require(std::is_sorted(c.rbegin(), c.rend()), fmt("n=%zu sample %zu curve not monotone", n, s));
    }
    if (n != 12) continue;
    for (const auto& row : rep.rows) {
      const double floor = static_cast<double>(n) * (1 - h2(row.delta.to_double())) - kReportSlack;
      worst_margin = std::min(worst_margin, row.mean - floor);
      out.require(row.mean >= floor, fmt("n=12 delta=%s: mean %.3f below n(1-H) - 24 = %.3f", row.delta.to_string().c_str(), row.mean, floor));
    }
  }
  if (out.pass) out.detail = fmt("reports at n=12 and 64 monotone; min margin over n(1-H)-24 at n=12 is %.2f bits", worst_margin);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ardtk acceptance suite"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria (1-9)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "codec round trip and counting", 60 + 120, codec_criterion},
      {2, "Blahut-Arimoto vs closed form", 5, shannon_criterion},
      {3, "covering constructions", 600, cover_criterion},
      {4, "marking game", 300, game_criterion},
      {5, "curves vs brute force at n=12", 600, oracle_criterion},
      {6, "shape family and bounds", 600, shape_criterion},
      {7, "denoising the noisy cross", 1800, denoise_criterion},
      {8, "majority counting in {0,1}^10", 600, majority_criterion},
      {9, "expected-rate comparison report", 1200, comparison_criterion},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += fmt(" (time limit %.0f s exceeded)", c.limit_seconds);
    }
    std::printf("criterion %d %-34s %s  %.1fs  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
