#include "evaluator.hpp"

#include <functional>
#include <string_view>

namespace ardtk::detail {

namespace {

std::uint64_t check_hash(const BitWord& w) {
  const auto bytes = w.bytes();
  const std::string_view view(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  return std::hash<std::string_view>{}(view) ^ (w.size() * 0x9e3779b97f4a7c15ull);
}

}  // namespace

BitWord serialize_members(const std::vector<BitWord>& members) {
  BitWord out;
  for (const auto& m : members) out.append(m);
  return out;
}

void Evaluator::note(const Candidate& c) {
  archive_.offer(c);
  if (watch_ && c.distortion <= *watch_ && (!watch_best_ || c.score < *watch_best_)) {
    watch_best_ = c.score;
    trace_.push_back({used_, c.score});
  }
}

std::optional<std::size_t> Evaluator::score(const BitWord& y) {
  const std::uint64_t key = content_hash(y);
  const std::uint64_t check = check_hash(y);
  const std::uint64_t slot = key ^ check;
  if (auto it = cache_.find(slot); it != cache_.end()) return it->second;
  if (used_ >= budget_) return std::nullopt;
  ++used_;
  Candidate c;
  c.destination = y;
  c.score = codec::codelength(y, codec_);
  c.distortion = *distance(spec_, x_, y);
  cache_.emplace(slot, c.score);
  note(c);
  return c.score;
}

std::optional<std::size_t> Evaluator::score_list(const std::vector<BitWord>& members) {
  const BitWord flat = serialize_members(members);
  const std::uint64_t slot = content_hash(flat) ^ check_hash(flat);
  if (auto it = cache_.find(slot); it != cache_.end()) return it->second;
  if (used_ >= budget_) return std::nullopt;
  ++used_;
  Candidate c;
  c.members = members;
  c.score = codec::codelength(flat, codec_);
  c.distortion = *distance(spec_, x_, std::span<const BitWord>(members));
  cache_.emplace(slot, c.score);
  note(c);
  return c.score;
}

}  // namespace ardtk::detail
