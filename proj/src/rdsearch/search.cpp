#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <thread>

#include "ardtk/error.hpp"
#include "ardtk/random.hpp"
#include "ardtk/rdsearch.hpp"
#include "evaluator.hpp"

namespace ardtk {

using detail::Evaluator;

namespace {

bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score < b.score;
  if (a.destination != b.destination) return a.destination < b.destination;
  return a.members < b.members;
}

bool within(const DistortionSpec& spec, const BitWord& x, const BitWord& y, const Rational& delta) {
  const Distance d = distance(spec, x, y);
  return d && *d <= delta;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<BitWord> coarse_masks(const BitWord& x) {
  std::vector<BitWord> out;
  const std::size_t n = x.size();
  for (std::size_t block = 2; block <= std::max<std::size_t>(2, n / 2); block *= 2) {
    BitWord y(n);
    for (std::size_t start = 0; start < n; start += block) {
      const std::size_t end = std::min(n, start + block);
      std::size_t ones_count = 0;
      for (std::size_t i = start; i < end; ++i) ones_count += x[i];
      const bool bit = 2 * ones_count > end - start;
      for (std::size_t i = start; i < end; ++i) y.set(i, bit);
    }
    out.push_back(std::move(y));
  }
  return out;
}

// Euclidean seeds: x rounded to multiples of 2^j, both directions.
std::vector<BitWord> rounding_seeds(const BitWord& x) {
  std::vector<BitWord> out;
  const std::size_t n = x.size();
  for (std::size_t j = 1; j <= n; ++j) {
    BitWord down = x, up = x;
    for (std::size_t i = n - j; i < n; ++i) {
      down.set(i, false);
      up.set(i, true);
    }
    out.push_back(down);
    out.push_back(up);
  }
  return out;
}

// Restores disagreements with x, in the given position order, until the
// word lies within delta.
BitWord restore(const DistortionSpec& spec, const BitWord& x, BitWord y, const Rational& delta,
                const std::vector<std::size_t>& order) {
  for (std::size_t i : order) {
    if (within(spec, x, y, delta)) break;
    y.set(i, x[i]);
  }
  return y;
}

std::vector<BitWord> projections(const DistortionSpec& spec, const BitWord& x, const BitWord& s,
                                 const Rational& delta, Rng& rng) {
  if (s.size() != x.size()) return {};
  if (within(spec, x, s, delta)) return {s};
  const std::size_t n = x.size();
  std::vector<std::size_t> forward(n), backward(n);
  for (std::size_t i = 0; i < n; ++i) {
    forward[i] = i;
    backward[i] = n - 1 - i;
  }
  std::vector<std::size_t> shuffled = forward;
  rng.shuffle(shuffled);
  return {restore(spec, x, s, delta, forward), restore(spec, x, s, delta, backward),
          restore(spec, x, s, delta, shuffled)};
}

struct Climber {
  const DistortionSpec& spec;
  const BitWord& x;
  const Rational& delta;
  Evaluator& eval;
  Rng rng;
  std::size_t width = 0;

  void word_move(BitWord& next, const BitWord& y, std::size_t i) {
    const std::size_t n = x.size();
    const unsigned kind = static_cast<unsigned>(rng.below(10));
    if (kind < 4) {
      next.flip(i);
    } else if (kind < 6) {
      // Toward x: restore the first disagreement at or after i, cyclically.
      for (std::size_t s = 0; s < n; ++s) {
        const std::size_t j = (i + s) % n;
        if (next[j] != x[j]) {
          next.set(j, x[j]);
          break;
        }
      }
    } else {
      const std::size_t len = 2 + rng.below(std::min<std::size_t>(15, n));
      const bool from_x = kind == 9;
      bool value = rng.below(2) == 1;
      if (kind == 8 && i > 0) value = y[i - 1];
      for (std::size_t j = i; j < std::min(n, i + len); ++j) next.set(j, from_x ? x[j] : value);
    }
  }

  // Row and column copies from a neighbour, and small constant rectangles.
  void image_move(BitWord& next, std::size_t i) {
    const std::size_t n = x.size(), height = n / width;
    const std::size_t row = i / width, col = i % width;
    const unsigned kind = static_cast<unsigned>(rng.below(3));
    if (kind == 0 && height > 1) {
      const std::size_t src = row == 0 ? 1 : row + 1 == height ? row - 1 : (rng.below(2) ? row + 1 : row - 1);
      const std::size_t len = 1 + rng.below(width - col);
      for (std::size_t c = col; c < col + len; ++c) next.set(row * width + c, next[src * width + c]);
    } else if (kind == 1 && width > 1) {
      const std::size_t src = col == 0 ? 1 : col + 1 == width ? col - 1 : (rng.below(2) ? col + 1 : col - 1);
      const std::size_t len = 1 + rng.below(height - row);
      for (std::size_t r = row; r < row + len; ++r) next.set(r * width + col, next[r * width + src]);
    } else {
      const std::size_t h = 1 + rng.below(4), w = 1 + rng.below(4);
      const bool value = rng.below(2) == 1;
      for (std::size_t r = row; r < std::min(height, row + h); ++r) {
        for (std::size_t c = col; c < std::min(width, col + w); ++c) next.set(r * width + c, value);
      }
    }
  }

  void run(BitWord y, std::size_t score, std::size_t budget_end) {
    const std::size_t n = x.size();
    // Cached proposals cost no budget; give up once they stop being fresh.
    const std::size_t stall_limit = 64 * n + 256;
    std::size_t stalled = 0;
    while (eval.used() < budget_end && !eval.exhausted() && stalled < stall_limit) {
      BitWord next = y;
      const std::size_t i = rng.below(n);
      if (width > 0 && rng.below(2) == 0) {
        image_move(next, i);
      } else {
        word_move(next, y, i);
      }
      if (next == y) {
        ++stalled;
        continue;
      }
      const std::size_t before = eval.used();
      const auto s = eval.score(next);
      if (!s) break;
      stalled = eval.used() == before ? stalled + 1 : 0;
      if (*s <= score && within(spec, x, next, delta)) {
        y = std::move(next);
        score = *s;
      }
    }
  }
};

std::vector<BitWord> subcube(const BitWord& x, const std::vector<std::size_t>& free_positions) {
  std::vector<BitWord> out;
  const std::size_t k = free_positions.size();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
    BitWord w = x;
    for (std::size_t b = 0; b < k; ++b) w.set(free_positions[b], (v >> b) & 1u);
    out.push_back(std::move(w));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// List family: subcubes around x with up to delta free positions, the free
// set improved by swaps.
void search_list(const BitWord& x, const Rational& delta, const SearchParams& params,
                 Evaluator& eval) {
  const std::size_t n = x.size();
  if (!eval.score_list({x})) return;
  std::size_t max_free = static_cast<std::size_t>(std::max<std::int64_t>(0, delta.floor()));
  max_free = std::min(max_free, n);
  while (max_free > 0 && (n << max_free) > (std::size_t{1} << 20)) --max_free;
  Rng rng(params.seed);
  for (std::size_t k = 1; k <= max_free; ++k) {
    std::vector<std::size_t> free_pos;
    for (std::size_t i = n - k; i < n; ++i) free_pos.push_back(i);
    auto s = eval.score_list(subcube(x, free_pos));
    if (!s) return;
    std::size_t best = *s;
    const std::size_t tries = std::max<std::size_t>(1, params.budget / (2 * max_free));
    for (std::size_t t = 0; t < tries && k < n; ++t) {
      auto cand = free_pos;
      std::size_t fixed;
      do {
        fixed = rng.below(n);
      } while (std::find(cand.begin(), cand.end(), fixed) != cand.end());
      cand[rng.below(k)] = fixed;
      std::sort(cand.begin(), cand.end());
      const auto cs = eval.score_list(subcube(x, cand));
      if (!cs) return;
      if (*cs <= best) {
        best = *cs;
        free_pos = cand;
      }
    }
  }
}

void search_heuristic(const BitWord& x, const DistortionSpec& spec, const Rational& delta,
                      const SearchParams& params, Evaluator& eval) {
  if (!eval.score(x)) return;
  Rng rng(params.seed);
  const std::size_t n = x.size();
  std::vector<BitWord> seeds{zeros(n), ones(n)};
  for (auto& m : coarse_masks(x)) seeds.push_back(std::move(m));
  if (spec.family == Family::Euclidean) {
    for (auto& r : rounding_seeds(x)) seeds.push_back(std::move(r));
  }
  for (const auto& s : params.seeds) seeds.push_back(s);

  std::vector<Candidate> starts;
  starts.push_back({x, {}, *eval.score(x), Rational(0)});
  for (const auto& s : seeds) {
    for (auto& y : projections(spec, x, s, delta, rng)) {
      const auto sc = eval.score(y);
      if (!sc) return;
      starts.push_back({y, {}, *sc, *distance(spec, x, y)});
    }
  }
  std::sort(starts.begin(), starts.end(), better);
  starts.erase(std::unique(starts.begin(), starts.end(),
                           [](const Candidate& a, const Candidate& b) {
                             return a.destination == b.destination;
                           }),
               starts.end());
  const std::size_t count = std::min(std::max<std::size_t>(1, params.starts), starts.size());
  const std::size_t begin = eval.used();
  const std::size_t remaining = params.budget > begin ? params.budget - begin : 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t width = params.width > 0 && n % params.width == 0 ? params.width : 0;
    Climber climber{spec, x, delta, eval, Rng(derive_seed(params.seed, i + 1)), width};
    const std::size_t end = begin + remaining * (i + 1) / count;
    climber.run(starts[i].destination, starts[i].score, end);
  }
}

Candidate as_candidate(const DistortionSpec& spec, const BitWord& x, const BitWord& y,
                       const codec::CodecParams& codec) {
  return Candidate{y, {}, codec::codelength(y, codec), *distance(spec, x, y)};
}

bool cube_enumerable(const DistortionSpec& spec, std::size_t budget) {
  if (spec.family == Family::List || spec.n > 24) return false;
  return budget >= (std::size_t{1} << spec.n);
}

std::vector<Rational> default_ladder(const DistortionSpec& spec) {
  std::vector<Rational> out;
  const auto n = static_cast<std::int64_t>(spec.n);
  switch (spec.family) {
    case Family::Hamming: {
      const std::int64_t top = n / 2;
      const std::int64_t levels = std::min<std::int64_t>(top + 1, 16);
      for (std::int64_t i = 0; i < levels; ++i) {
        out.emplace_back(levels == 1 ? 0 : top * i / (levels - 1), n);
      }
      break;
    }
    case Family::Euclidean:
      for (std::int64_t i = 0; i <= 16; ++i) out.emplace_back(i, 16);
      break;
    case Family::List:
      for (std::int64_t l = 0; l <= std::min<std::int64_t>(n, 16); ++l) out.emplace_back(l);
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ParetoArchive explore_radii(const BitWord& x, const DistortionSpec& spec, const SearchParams& params,
                            std::vector<Rational> radii, std::size_t* evaluations, bool* exhaustive) {
  spec.validate();
  if (x.size() != spec.n) fail(ErrorKind::Domain, "source word length differs from n");
  ParetoArchive archive;
  if (cube_enumerable(spec, params.budget)) {
    const std::uint64_t total = std::uint64_t{1} << spec.n;
    const std::size_t chunks = std::max<unsigned>(1, params.threads) * 4;
    std::vector<ParetoArchive> parts(chunks);
    parallel_for(chunks, params.threads, [&](std::size_t c) {
      for (std::uint64_t v = total * c / chunks; v < total * (c + 1) / chunks; ++v) {
        parts[c].offer(as_candidate(spec, x, BitWord::from_uint(v, spec.n), params.codec));
      }
    });
    for (const auto& p : parts) archive.merge(p);
    if (evaluations) *evaluations = total;
    if (exhaustive) *exhaustive = true;
    return archive;
  }
  if (radii.empty()) radii = default_ladder(spec);
  std::vector<ParetoArchive> parts(radii.size());
  std::vector<std::size_t> used(radii.size(), 0);
  parallel_for(radii.size(), params.threads, [&](std::size_t i) {
    SearchParams local = params;
    local.budget = params.budget / radii.size();
    local.seed = derive_seed(params.seed, i);
    local.threads = 1;
    Evaluator eval(x, spec, params.codec, local.budget, parts[i]);
    if (spec.family == Family::List) {
      search_list(x, radii[i], local, eval);
    } else {
      search_heuristic(x, spec, radii[i], local, eval);
    }
    used[i] = eval.used();
  });
  for (std::size_t i = 0; i < parts.size(); ++i) archive.merge(parts[i]);
  if (evaluations) {
    *evaluations = 0;
    for (auto u : used) *evaluations += u;
  }
  if (exhaustive) *exhaustive = false;
  return archive;
}

namespace {

CurvePoint point_for(const Rational& axis, const Candidate* c) {
  CurvePoint p;
  p.axis_value = axis;
  if (c) {
    p.bits = c->score;
    p.distortion = c->distortion;
    p.candidate_hash = c->id();
    p.destination = c->destination;
  }
  return p;
}

}  // namespace

std::uint64_t Candidate::id() const {
  if (members.empty()) return content_hash(destination);
  return content_hash(detail::serialize_members(members));
}

void ParetoArchive::offer(const Candidate& c) {
  // Keep c unless some entry with no larger distortion is at least as good.
  auto it = by_distortion_.upper_bound(c.distortion);
  if (it != by_distortion_.begin()) {
    auto prev = std::prev(it);
    const Candidate& p = prev->second;
    if (prev->first == c.distortion) {
      if (!better(c, p)) return;
    } else if (p.score <= c.score) {
      return;
    }
  }
  by_distortion_[c.distortion] = c;
  // Drop entries with larger distortion that are no cheaper.
  it = by_distortion_.upper_bound(c.distortion);
  while (it != by_distortion_.end() && it->second.score >= c.score) it = by_distortion_.erase(it);
}

void ParetoArchive::merge(const ParetoArchive& other) {
  for (const auto& [d, c] : other.by_distortion_) offer(c);
}

const Candidate* ParetoArchive::best_within(const Rational& delta) const {
  auto it = by_distortion_.upper_bound(delta);
  if (it == by_distortion_.begin()) return nullptr;
  return &std::prev(it)->second;
}

const Candidate* ParetoArchive::best_under(std::size_t bits) const {
  for (const auto& [d, c] : by_distortion_) {
    if (c.score <= bits) return &c;
  }
  return nullptr;
}

std::vector<Candidate> ParetoArchive::front() const {
  std::vector<Candidate> out;
  for (const auto& [d, c] : by_distortion_) out.push_back(c);
  return out;
}

SearchResult search_min_rate(const BitWord& x, const DistortionSpec& spec, const Rational& delta,
                             const SearchParams& params) {
  spec.validate();
  if (x.size() != spec.n) fail(ErrorKind::Domain, "source word length differs from n");
  ParetoArchive archive;
  Evaluator eval(x, spec, params.codec, std::max<std::size_t>(1, params.budget), archive);
  eval.watch(delta);
  SearchResult out;
  if (spec.family == Family::List) {
    search_list(x, delta, params, eval);
  } else {
    const Ball ball = make_ball(spec, x, delta);
    if (spec.n <= 24 && ball_cardinality(ball) <= params.budget) {
      for (const auto& y : ball_members(ball)) eval.score(y);
      out.exhaustive = true;
    } else {
      search_heuristic(x, spec, delta, params, eval);
    }
  }
  out.best = *archive.best_within(delta);
  out.trace = eval.trace();
  out.evaluations = eval.used();
  return out;
}

ParetoArchive explore(const BitWord& x, const DistortionSpec& spec, const SearchParams& params,
                      std::size_t* evaluations, bool* exhaustive) {
  return explore_radii(x, spec, params, {}, evaluations, exhaustive);
}

const char* to_string(Axis axis) noexcept {
  switch (axis) {
    case Axis::Rate: return "rate";
    case Axis::Distortion: return "distortion";
    case Axis::Canonical: return "canonical";
  }
  return "?";
}

Axis parse_axis(const std::string& name) {
  if (name == "rate") return Axis::Rate;
  if (name == "distortion") return Axis::Distortion;
  if (name == "canonical") return Axis::Canonical;
  fail(ErrorKind::Usage, "unknown axis '" + name + "' (rate|distortion|canonical)");
}

CurveEstimate curve_from_archive(const ParetoArchive& archive, const DistortionSpec& spec, Axis axis,
                                 const std::vector<Rational>& grid) {
  CurveEstimate out;
  out.axis = axis;
  for (const auto& g : grid) {
    const Candidate* c = nullptr;
    switch (axis) {
      case Axis::Rate: c = archive.best_under(static_cast<std::size_t>(std::max<std::int64_t>(0, g.floor()))); break;
      case Axis::Distortion: c = archive.best_within(g); break;
      case Axis::Canonical:
        c = archive.best_within(radius_for_log_cardinality(spec, static_cast<std::size_t>(g.floor())));
        break;
    }
    out.points.push_back(point_for(g, c));
  }
  return out;
}

CurveEstimate distortion_rate_curve(const BitWord& x, const DistortionSpec& spec,
                                    const std::vector<std::size_t>& rate_grid,
                                    const SearchParams& params) {
  if (!std::is_sorted(rate_grid.begin(), rate_grid.end())) fail(ErrorKind::Domain, "rate grid must be sorted");
  std::vector<Rational> grid;
  for (auto r : rate_grid) grid.emplace_back(static_cast<std::int64_t>(r));
  std::size_t used = 0;
  bool exhaustive = false;
  const auto archive = explore(x, spec, params, &used, &exhaustive);
  auto out = curve_from_archive(archive, spec, Axis::Rate, grid);
  out.budget_used = used;
  out.exhaustive = exhaustive;
  out.seed = params.seed;
  return out;
}

CurveEstimate rate_distortion_curve(const BitWord& x, const DistortionSpec& spec,
                                    const std::vector<Rational>& delta_grid,
                                    const SearchParams& params) {
  if (!std::is_sorted(delta_grid.begin(), delta_grid.end())) fail(ErrorKind::Domain, "delta grid must be sorted");
  std::size_t used = 0;
  bool exhaustive = false;
  const auto archive = explore_radii(x, spec, params, delta_grid, &used, &exhaustive);
  auto out = curve_from_archive(archive, spec, Axis::Distortion, delta_grid);
  out.budget_used = used;
  out.exhaustive = exhaustive;
  out.seed = params.seed;
  return out;
}

CurveEstimate canonical_estimate(const BitWord& x, const DistortionSpec& spec,
                                 const std::vector<std::size_t>& l_grid, const SearchParams& params,
                                 double c) {
  std::vector<Rational> grid, radii;
  for (auto l : l_grid) {
    if (l > spec.n) fail(ErrorKind::Domain, "canonical grid exceeds n");
    grid.emplace_back(static_cast<std::int64_t>(l));
    radii.push_back(radius_for_log_cardinality(spec, l));
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  std::size_t used = 0;
  bool exhaustive = false;
  const auto archive = explore_radii(x, spec, params, radii, &used, &exhaustive);
  auto out = curve_from_archive(archive, spec, Axis::Canonical, grid);
  out.budget_used = used;
  out.exhaustive = exhaustive;
  out.seed = params.seed;
  out.slack = c * std::log2(static_cast<double>(spec.n));
  return out;
}

}  // namespace ardtk
