#include "ardtk/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ardtk/bitword.hpp"
#include "ardtk/error.hpp"

namespace ardtk {

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::size_t universe(const GameParams& p) { return std::size_t{1} << p.n; }

void check_set(const ElementSet& s, const GameParams& p) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= universe(p)) fail(ErrorKind::Domain, "set element outside {0,1}^n");
    if (i > 0 && s[i] <= s[i - 1]) fail(ErrorKind::Domain, "set elements must be sorted and distinct");
  }
}

class Scripted : public Adversary {
 public:
  explicit Scripted(std::vector<ElementSet> sets) : sets_(std::move(sets)) {}
  std::optional<ElementSet> next(const GameTranscript& so_far) override {
    if (so_far.moves.size() >= sets_.size()) return std::nullopt;
    return sets_[so_far.moves.size()];
  }

 private:
  std::vector<ElementSet> sets_;
};

class RandomSets : public Adversary {
 public:
  RandomSets(const GameParams& p, std::uint64_t seed, std::uint64_t moves)
      : p_(p), rng_(seed), moves_(moves) {}
  std::optional<ElementSet> next(const GameTranscript& so_far) override {
    if (so_far.moves.size() >= moves_) return std::nullopt;
    const std::size_t u = universe(p_);
    const std::size_t size = 1 + rng_.below(u);
    const auto picked = rng_.subset(u, size);
    return ElementSet(picked.begin(), picked.end());
  }

 private:
  GameParams p_;
  Rng rng_;
  std::uint64_t moves_;
};

class RepeatSets : public Adversary {
 public:
  RepeatSets(const GameParams& p, std::uint64_t seed, std::uint64_t moves) : rng_(seed), moves_(moves) {
    const std::size_t u = universe(p);
    const std::size_t pool = 1 + rng_.below(3);
    for (std::size_t i = 0; i < pool; ++i) {
      const auto picked = rng_.subset(u, std::min<std::size_t>(u, 1 + rng_.below(2)));
      pool_.emplace_back(picked.begin(), picked.end());
    }
  }
  std::optional<ElementSet> next(const GameTranscript& so_far) override {
    if (so_far.moves.size() >= moves_) return std::nullopt;
    return pool_[rng_.below(pool_.size())];
  }

 private:
  Rng rng_;
  std::uint64_t moves_;
  std::vector<ElementSet> pool_;
};

class BallSets : public Adversary {
 public:
  BallSets(const GameParams& p, std::uint64_t seed, std::uint64_t moves) : moves_(moves) {
    Rng rng(seed);
    stream_ = hamming_ball_stream(p.n, rng.below(p.n / 2 + 1));
  }
  std::optional<ElementSet> next(const GameTranscript& so_far) override {
    if (so_far.moves.size() >= moves_) return std::nullopt;
    return stream_[so_far.moves.size() % stream_.size()];
  }

 private:
  std::uint64_t moves_;
  std::vector<ElementSet> stream_;
};

// Feeds the uncovered elements that are closest to the threshold, so that
// every greedy block has to react.
class AdaptiveSets : public Adversary {
 public:
  AdaptiveSets(const GameParams& p, std::uint64_t seed, std::uint64_t moves)
      : p_(p), rng_(seed), moves_(moves), occurrences_(universe(p), 0), covered_(universe(p), 0) {}
  std::optional<ElementSet> next(const GameTranscript& so_far) override {
    if (so_far.moves.size() >= moves_) return std::nullopt;
    for (; seen_ < so_far.moves.size(); ++seen_) {
      const Move& mv = so_far.moves[seen_];
      for (auto x : mv.alice) ++occurrences_[x];
      for (auto i : mv.marks) {
        for (auto x : so_far.moves[i].alice) covered_[x] = 1;
      }
    }
    std::vector<std::uint32_t> order;
    for (std::uint32_t x = 0; x < universe(p_); ++x) {
      if (!covered_[x]) order.push_back(x);
    }
    if (order.empty()) {
      for (std::uint32_t x = 0; x < universe(p_); ++x) order.push_back(x);
    }
    rng_.shuffle(order);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return occurrences_[a] > occurrences_[b];
    });
    const std::size_t size = 1 + rng_.below(std::min<std::size_t>(order.size(), 4));
    ElementSet s(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(s.begin(), s.end());
    return s;
  }

 private:
  GameParams p_;
  Rng rng_;
  std::uint64_t moves_;
  std::vector<std::uint64_t> occurrences_;
  std::vector<std::uint8_t> covered_;
  std::size_t seen_ = 0;
};

}  // namespace

void GameParams::validate() const {
  if (n < 1 || n > 24) fail(ErrorKind::Domain, "game needs 1 <= n <= 24");
  if (k < 1 || k > 30) fail(ErrorKind::Domain, "game needs 1 <= k <= 30");
  if (m > k) fail(ErrorKind::Domain, "game needs m <= k");
}

const char* to_string(Strategy s) noexcept {
  return s == Strategy::Deterministic ? "det" : "prob";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "det" || name == "deterministic") return Strategy::Deterministic;
  if (name == "prob" || name == "probabilistic") return Strategy::Probabilistic;
  fail(ErrorKind::Usage, "unknown strategy '" + name + "' (det|prob)");
}

const char* to_string(AdversaryKind kind) noexcept {
  switch (kind) {
    case AdversaryKind::Random: return "random";
    case AdversaryKind::Repeat: return "repeat";
    case AdversaryKind::Balls: return "balls";
    case AdversaryKind::Adaptive: return "adaptive";
  }
  return "?";
}

AdversaryKind parse_adversary(const std::string& name) {
  if (name == "random") return AdversaryKind::Random;
  if (name == "repeat") return AdversaryKind::Repeat;
  if (name == "balls") return AdversaryKind::Balls;
  if (name == "adaptive") return AdversaryKind::Adaptive;
  fail(ErrorKind::Usage, "unknown adversary '" + name + "' (random|repeat|balls|adaptive|file)");
}

std::size_t GameTranscript::total_marks() const {
  std::size_t total = 0;
  for (const auto& mv : moves) total += mv.marks.size();
  return total;
}

bool GameTranscript::win() const {
  return std::all_of(moves.begin(), moves.end(), [](const Move& mv) { return mv.win; });
}

std::uint64_t largest_pow2_dividing(std::uint64_t t) {
  if (t == 0) fail(ErrorKind::Domain, "largest_pow2_dividing needs t >= 1");
  return t & (~t + 1);
}

BobStep bob_deterministic_step(std::span<const ElementSet> history, const GameParams& params) {
  params.validate();
  const std::uint64_t t = history.size();
  if (t == 0 || t > params.max_moves()) fail(ErrorKind::Domain, "move index outside 1 .. 2^k - 1");
  BobStep step;
  const std::uint64_t block = largest_pow2_dividing(t);
  step.block_exponent = static_cast<unsigned>(std::countr_zero(block));
  const std::size_t first = static_cast<std::size_t>(t - block);

  std::vector<std::uint64_t> count(universe(params), 0);
  for (std::size_t i = first; i < t; ++i) {
    for (auto x : history[i]) ++count[x];
  }
  // x is in T iff count * k >= 2^m.
  std::vector<std::uint8_t> in_t(universe(params), 0);
  std::size_t remaining = 0;
  for (std::size_t x = 0; x < count.size(); ++x) {
    if (count[x] * params.k >= params.threshold()) {
      in_t[x] = 1;
      ++remaining;
    }
  }
  while (remaining > 0) {
    std::size_t best = first, best_hits = 0;
    for (std::size_t i = first; i < t; ++i) {
      std::size_t hits = 0;
      for (auto x : history[i]) hits += in_t[x];
      if (hits > best_hits) {
        best_hits = hits;
        best = i;
      }
    }
    for (auto x : history[best]) {
      if (in_t[x]) {
        in_t[x] = 0;
        --remaining;
      }
    }
    step.marks.push_back(best);
    ++step.passes;
  }
  return step;
}

double mark_probability(const GameParams& params) {
  const double p = std::ldexp((static_cast<double>(params.n) + 1.0) * kLn2, -static_cast<int>(params.m));
  return std::min(1.0, p);
}

bool bob_probabilistic_step(const GameParams& params, Rng& rng) {
  const double p = mark_probability(params);
  return p >= 1.0 || rng.bernoulli(p);
}

std::uint64_t block_pass_bound(const GameParams& params, unsigned j) {
  const double v = std::ldexp(static_cast<double>(params.k) * static_cast<double>(params.n) * kLn2,
                              static_cast<int>(j) - static_cast<int>(params.m));
  return static_cast<std::uint64_t>(std::ceil(v));
}

std::uint64_t mark_bound(const GameParams& params) {
  params.validate();
  std::uint64_t total = 0;
  for (unsigned j = 0; j < params.k; ++j) {
    total += (std::uint64_t{1} << (params.k - j)) * block_pass_bound(params, j);
  }
  return total;
}

double probabilistic_mark_budget(const GameParams& params) {
  return std::ldexp((static_cast<double>(params.n) + 1.0) * kLn2,
                    static_cast<int>(params.k) - static_cast<int>(params.m) + 1);
}

std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, const GameParams& params,
                                          std::uint64_t seed, std::optional<std::uint64_t> moves) {
  params.validate();
  const std::uint64_t count = std::min(moves.value_or(params.max_moves()), params.max_moves());
  switch (kind) {
    case AdversaryKind::Random: return std::make_unique<RandomSets>(params, seed, count);
    case AdversaryKind::Repeat: return std::make_unique<RepeatSets>(params, seed, count);
    case AdversaryKind::Balls: return std::make_unique<BallSets>(params, seed, count);
    case AdversaryKind::Adaptive: return std::make_unique<AdaptiveSets>(params, seed, count);
  }
  return nullptr;
}

std::unique_ptr<Adversary> make_scripted_adversary(std::vector<ElementSet> sets) {
  return std::make_unique<Scripted>(std::move(sets));
}

std::vector<ElementSet> parse_adversary_sets(const std::string& text, std::size_t n) {
  std::vector<ElementSet> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      if (line.find_first_not_of(" \t") == hash) continue;
      line.resize(hash);
    }
    std::istringstream words(line);
    std::string w;
    ElementSet s;
    while (words >> w) {
      if (w.size() != n) fail(ErrorKind::Usage, "element '" + w + "' is not an n-bit word");
      s.push_back(static_cast<std::uint32_t>(BitWord::from_string(w).to_uint()));
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ElementSet> hamming_ball_stream(std::size_t n, std::size_t r) {
  std::vector<ElementSet> out;
  const std::uint32_t u = std::uint32_t{1} << n;
  for (std::uint32_t c = 0; c < u; ++c) {
    ElementSet s;
    for (std::uint32_t x = 0; x < u; ++x) {
      if (static_cast<std::size_t>(std::popcount(c ^ x)) <= r) s.push_back(x);
    }
    out.push_back(std::move(s));
  }
  return out;
}

GameTranscript play_game(Adversary& alice, const GameParams& params, Strategy strategy,
                         std::uint64_t seed) {
  params.validate();
  GameTranscript tr;
  tr.params = params;
  tr.strategy = strategy;
  tr.seed = seed;
  Rng rng(seed);
  std::vector<ElementSet> history;
  std::vector<std::uint64_t> occurrences(universe(params), 0);
  std::vector<std::uint8_t> covered(universe(params), 0);
  std::vector<std::uint8_t> marked;
  std::size_t violations = 0;  // heavy elements outside every marked set

  while (auto set = alice.next(tr)) {
    if (history.size() >= params.max_moves()) {
      fail(ErrorKind::AdversaryOverflow, "adversary exceeded 2^k - 1 sets");
    }
    check_set(*set, params);
    for (auto x : *set) {
      if (++occurrences[x] == params.threshold() && !covered[x]) ++violations;
    }
    history.push_back(*set);
    marked.push_back(0);

    Move mv;
    mv.alice = std::move(*set);
    const std::size_t t = history.size();
    mv.block_exponent = static_cast<unsigned>(std::countr_zero(t));
    std::vector<std::size_t> picks;
    if (strategy == Strategy::Deterministic) {
      auto step = bob_deterministic_step(history, params);
      picks = std::move(step.marks);
      mv.passes = step.passes;
    } else if (bob_probabilistic_step(params, rng)) {
      picks.push_back(t - 1);
    }
    for (auto i : picks) {
      if (marked[i]) continue;
      marked[i] = 1;
      mv.marks.push_back(i);
      for (auto x : history[i]) {
        if (!covered[x]) {
          covered[x] = 1;
          if (occurrences[x] >= params.threshold()) --violations;
        }
      }
    }
    mv.win = violations == 0;
    tr.moves.push_back(std::move(mv));
  }
  return tr;
}

TranscriptCheck verify_transcript(const GameTranscript& tr, const GameParams& params) {
  params.validate();
  if (params.n > 16) fail(ErrorKind::SizeGuard, "transcript verification needs n <= 16");
  TranscriptCheck out;
  out.bound = mark_bound(params);
  auto violation = [&](std::size_t move, std::string why) {
    if (out.ok) {
      out.ok = false;
      out.first_violation = move;
      out.reason = std::move(why);
    }
  };
  if (tr.moves.size() > params.max_moves()) violation(params.max_moves(), "more than 2^k - 1 moves");

  const std::size_t u = universe(params);
  std::vector<std::uint64_t> occurrences(u, 0);
  std::vector<std::uint8_t> covered(u, 0), marked(tr.moves.size(), 0);
  for (std::size_t t = 0; t < tr.moves.size(); ++t) {
    const Move& mv = tr.moves[t];
    for (std::size_t i = 0; i < mv.alice.size(); ++i) {
      if (mv.alice[i] >= u || (i > 0 && mv.alice[i] <= mv.alice[i - 1])) {
        violation(t, "malformed set");
      } else {
        ++occurrences[mv.alice[i]];
      }
    }
    for (auto i : mv.marks) {
      if (i > t) {
        violation(t, "mark references a set not yet produced");
        continue;
      }
      if (marked[i]) violation(t, "set marked twice");
      marked[i] = 1;
      ++out.total_marks;
      for (auto x : tr.moves[i].alice) {
        if (x < u) covered[x] = 1;
      }
    }
    bool win = true;
    for (std::size_t x = 0; x < u && win; ++x) {
      if (occurrences[x] >= params.threshold() && !covered[x]) win = false;
    }
    if (win != mv.win) violation(t, "recorded win flag disagrees with the element scan");
    if (!win) violation(t, "heavy element left uncovered");
    if (tr.strategy == Strategy::Deterministic &&
        mv.passes > block_pass_bound(params, static_cast<unsigned>(std::countr_zero(t + 1)))) {
      violation(t, "greedy passes exceed the block bound");
    }
  }
  if (tr.strategy == Strategy::Deterministic && out.total_marks > out.bound) {
    violation(tr.moves.size(), "total marks exceed mark_bound");
  }
  return out;
}

}  // namespace ardtk
