#pragma once

// Pairwise shared-event counts among candidate episodes, computed in one
// pass over the sequence with per-episode automata.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "cse/event.hpp"
#include "cse/miner.hpp"

namespace cse {

// Symmetric count matrix with zero diagonal. Dense up to kDenseLimit
// candidates, a hash map of unordered pairs beyond that.
class OverlapMatrix {
 public:
  static constexpr std::size_t kDenseLimit = 4096;

  OverlapMatrix() = default;
  explicit OverlapMatrix(std::size_t n) : n_(n) {
    if (dense()) dense_.assign(n * n, 0);
  }

  std::size_t size() const noexcept { return n_; }
  bool dense() const noexcept { return n_ <= kDenseLimit; }

  std::uint64_t at(std::size_t a, std::size_t b) const {
    if (a == b) return 0;
    if (dense()) return dense_[a * n_ + b];
    auto it = sparse_.find(key(a, b));
    return it == sparse_.end() ? 0 : it->second;
  }

  void increment(std::size_t a, std::size_t b) {
    if (a == b) return;
    if (dense()) {
      ++dense_[a * n_ + b];
      ++dense_[b * n_ + a];
    } else {
      ++sparse_[key(a, b)];
    }
  }

  std::uint64_t row_sum(std::size_t a, std::span<const std::size_t> others) const {
    std::uint64_t s = 0;
    for (std::size_t b : others) s += at(a, b);
    return s;
  }

  friend bool operator==(const OverlapMatrix& x, const OverlapMatrix& y) {
    if (x.n_ != y.n_) return false;
    for (std::size_t a = 0; a < x.n_; ++a)
      for (std::size_t b = 0; b < x.n_; ++b)
        if (x.at(a, b) != y.at(a, b)) return false;
    return true;
  }

 private:
  static std::uint64_t key(std::size_t a, std::size_t b) noexcept {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }

  std::size_t n_ = 0;
  std::vector<std::uint32_t> dense_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

// One live occurrence being tracked: the automaton of `candidate` waiting
// for its node next_pos (0-based), having started at `start`.
struct AutomatonState {
  std::uint32_t candidate = 0;
  std::uint32_t next_pos = 0;
  Time start = 0;
};

// For every event, the candidates owning an occurrence that contains it;
// each unordered pair of those candidates gets +1. Automata are spawned
// only at known occurrence starts and advance only on an exact offset match,
// so every candidate's occurrence list must be exact for seq.
inline OverlapMatrix find_overlap_matrix(const EventSequence& seq,
                                         const CandidateSet& candidates) {
  const std::size_t n = candidates.size();
  OverlapMatrix om(n);
  if (n == 0 || seq.empty()) return om;

  // Permanent j=1 templates, keyed by first event type.
  std::vector<std::vector<std::uint32_t>> templates(seq.alphabet().size());
  for (std::size_t c = 0; c < n; ++c)
    templates[candidates[c].episode.types.front()].push_back(static_cast<std::uint32_t>(c));
  // Next not-yet-seen occurrence of each candidate.
  std::vector<std::size_t> cursor(n, 0);

  // waits(E), bucketed by the exact time the awaited event must carry.
  struct WaitKey {
    EventType type;
    Time time;
    bool operator==(const WaitKey&) const = default;
  };
  struct WaitKeyHash {
    std::size_t operator()(const WaitKey& k) const noexcept {
      return std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(k.time) * 1000003ULL ^ k.type);
    }
  };
  std::unordered_map<WaitKey, std::vector<AutomatonState>, WaitKeyHash> waits;

  std::vector<std::uint32_t> accepted;
  auto advance = [&](const AutomatonState& s) {
    const Episode& ep = candidates[s.candidate].episode;
    accepted.push_back(s.candidate);
    const std::uint32_t next = s.next_pos + 1;
    if (next < ep.size()) {
      waits[WaitKey{ep.types[next], s.start + ep.offset(next)}].push_back(
          AutomatonState{s.candidate, next, s.start});
    }
  };

  for (const Event& e : seq.events()) {
    accepted.clear();
    for (std::uint32_t c : templates[e.type]) {
      const auto& windows = candidates[c].windows;
      std::size_t& cur = cursor[c];
      while (cur < windows.size() && windows[cur].start < e.time) ++cur;
      if (cur < windows.size() && windows[cur].start == e.time) {
        ++cur;
        advance(AutomatonState{c, 0, e.time});
      }
    }
    if (auto it = waits.find(WaitKey{e.type, e.time}); it != waits.end()) {
      std::vector<AutomatonState> ready = std::move(it->second);
      waits.erase(it);
      for (const AutomatonState& s : ready) advance(s);
    }
    for (std::size_t i = 0; i < accepted.size(); ++i)
      for (std::size_t j = i + 1; j < accepted.size(); ++j) om.increment(accepted[i], accepted[j]);
  }
  return om;
}

}  // namespace cse
