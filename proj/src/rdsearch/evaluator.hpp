#pragma once

#include <optional>
#include <unordered_map>

#include "ardtk/rdsearch.hpp"

namespace ardtk::detail {

/// Budgeted, memoized scorer for one search thread. Every fresh evaluation
/// is offered to the archive; repeated destinations are free.
class Evaluator {
 public:
  Evaluator(const BitWord& x, const DistortionSpec& spec, const codec::CodecParams& codec,
            std::size_t budget, ParetoArchive& archive)
      : x_(x), spec_(spec), codec_(codec), budget_(budget), archive_(archive) {}

  /// Score of a word destination, or nullopt once the budget is spent.
  std::optional<std::size_t> score(const BitWord& y);
  /// Score of a list-family destination (sorted members).
  std::optional<std::size_t> score_list(const std::vector<BitWord>& members);

  std::size_t used() const noexcept { return used_; }
  bool exhausted() const noexcept { return used_ >= budget_; }

  /// Records best-so-far improvements for candidates within `delta`.
  void watch(const Rational& delta) {
    watch_ = delta;
    watch_best_.reset();
    trace_.clear();
  }
  const std::vector<TracePoint>& trace() const noexcept { return trace_; }

 private:
  void note(const Candidate& c);

  const BitWord& x_;
  DistortionSpec spec_;
  codec::CodecParams codec_;
  std::size_t budget_;
  std::size_t used_ = 0;
  ParetoArchive& archive_;
  std::unordered_map<std::uint64_t, std::size_t> cache_;
  std::optional<Rational> watch_;
  std::optional<std::size_t> watch_best_;
  std::vector<TracePoint> trace_;
};

BitWord serialize_members(const std::vector<BitWord>& members);

}  // namespace ardtk::detail
