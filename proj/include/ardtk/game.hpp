#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ardtk/random.hpp"

// Online set-cover marking game.
//
// Alice produces subsets of {0,1}^n one at a time, fewer than 2^k in total.
// After each of her moves Bob may mark any sets produced so far. Bob wins
// if after every one of his moves each element lying in at least 2^m of
// Alice's sets belongs to a marked set. Elements are the integers
// 0 .. 2^n - 1, read as n-bit words most significant bit first.

namespace ardtk {

struct GameParams {
  std::size_t n = 1;
  unsigned k = 1;
  unsigned m = 0;

  /// 1 <= n <= 24, 1 <= k <= 30, m <= k.
  void validate() const;
  std::uint64_t max_moves() const { return (std::uint64_t{1} << k) - 1; }
  std::uint64_t threshold() const { return std::uint64_t{1} << m; }
};

/// Sorted, distinct element indices.
using ElementSet = std::vector<std::uint32_t>;

enum class Strategy { Deterministic, Probabilistic };
const char* to_string(Strategy s) noexcept;
Strategy parse_strategy(const std::string& name);

struct Move {
  ElementSet alice;
  std::vector<std::size_t> marks;  // indices into Alice's sets, in marking order
  unsigned block_exponent = 0;     // j with 2^j the largest power dividing t
  std::size_t passes = 0;          // greedy passes e_j (deterministic only)
  bool win = false;
};

struct GameTranscript {
  GameParams params;
  Strategy strategy = Strategy::Deterministic;
  std::uint64_t seed = 0;
  std::vector<Move> moves;

  std::size_t total_marks() const;
  bool win() const;
};

std::uint64_t largest_pow2_dividing(std::uint64_t t);

struct BobStep {
  std::vector<std::size_t> marks;
  unsigned block_exponent = 0;
  std::size_t passes = 0;
};

/// Greedy step for move t = history.size(): over the last 2^j sets, with
/// 2^j the largest power of two dividing t, repeatedly mark the set
/// meeting the most not-yet-removed elements among those occurring in at
/// least 2^m / k of them (least index on ties).
BobStep bob_deterministic_step(std::span<const ElementSet> history, const GameParams& params);

/// min(1, 2^-m (n + 1) ln 2).
double mark_probability(const GameParams& params);
bool bob_probabilistic_step(const GameParams& params, Rng& rng);

/// sum_{j<k} 2^(k-j) ceil(2^(j-m) k n ln 2).
std::uint64_t mark_bound(const GameParams& params);
/// ceil(2^(j-m) k n ln 2), the greedy pass limit for blocks of size 2^j.
std::uint64_t block_pass_bound(const GameParams& params, unsigned j);
/// 2^(k-m+1) (n + 1) ln 2, the mark budget for the probabilistic strategy.
double probabilistic_mark_budget(const GameParams& params);

/// Alice. next() sees the transcript so far, Bob's marks included, and
/// returns nullopt to stop.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::optional<ElementSet> next(const GameTranscript& so_far) = 0;
};

enum class AdversaryKind { Random, Repeat, Balls, Adaptive };
const char* to_string(AdversaryKind kind) noexcept;
/// Accepts the built-in kinds; "file" is handled by the caller.
AdversaryKind parse_adversary(const std::string& name);

/// Built-in adversaries, each playing `moves` sets (clamped to 2^k - 1):
///   random   - uniform subsets of uniform size;
///   repeat   - a pool of one to three sets of size at most two, replayed;
///   balls    - Hamming balls of a seeded radius in center enumeration order;
///   adaptive - uncovered elements with the highest occurrence counts.
std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, const GameParams& params,
                                          std::uint64_t seed, std::optional<std::uint64_t> moves = {});

/// Plays a fixed list of sets.
std::unique_ptr<Adversary> make_scripted_adversary(std::vector<ElementSet> sets);

/// One set per line, elements as n-bit words separated by whitespace; an
/// empty line is the empty set and '#' starts a comment.
std::vector<ElementSet> parse_adversary_sets(const std::string& text, std::size_t n);

/// Hamming balls of radius r around every center, centers increasing.
std::vector<ElementSet> hamming_ball_stream(std::size_t n, std::size_t r);

/// Throws Error(AdversaryOverflow) when Alice exceeds 2^k - 1 sets and
/// Error(Domain) for elements outside {0,1}^n.
GameTranscript play_game(Adversary& alice, const GameParams& params, Strategy strategy,
                         std::uint64_t seed = 0);

struct TranscriptCheck {
  bool ok = true;
  std::optional<std::size_t> first_violation;  // 0-based move index
  std::string reason;
  std::size_t total_marks = 0;
  std::uint64_t bound = 0;
};

/// Independent replay for n <= 16: marks reference produced sets, recorded
/// win flags match an exhaustive element scan, and Bob wins after every
/// move. Deterministic transcripts must also respect the per-block pass
/// limit and the total mark_bound.
TranscriptCheck verify_transcript(const GameTranscript& tr, const GameParams& params);

}  // namespace ardtk
