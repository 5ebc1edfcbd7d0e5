#pragma once

// Candidate generation: depth-first mining of all frequent episodes, and
// greedy best-extension growth that yields at most one candidate per
// starting event type.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <span>
#include <vector>

#include "cse/event.hpp"
#include "cse/score.hpp"

namespace cse {

struct MinerConfig {
  Time max_gap = 5;
  // Fraction of |D|; an episode is frequent with >= this many occurrences.
  double freq_threshold = 0.0;
  std::optional<std::size_t> max_episode_len;
  // Worker count for the per-prefix fan-out. 0 or 1 runs inline.
  unsigned threads = 1;

  void validate() const {
    if (max_gap < 1) throw InvalidArgument("max gap must be at least 1");
    if (!(freq_threshold >= 0.0 && freq_threshold <= 1.0))
      throw InvalidArgument("frequency threshold must lie in [0, 1]");
    if (max_episode_len && *max_episode_len < 1)
      throw InvalidArgument("max episode length must be at least 1");
  }

  // Smallest admissible occurrence count on a sequence of n events. Never
  // below 1: an episode with no occurrences is not mined.
  std::size_t threshold_count(std::size_t n) const {
    const double raw = freq_threshold * static_cast<double>(n);
    const auto c = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return std::max<std::size_t>(c, 1);
  }

  bool may_grow(std::size_t len) const noexcept {
    return !max_episode_len || len < *max_episode_len;
  }
};

struct CandidateSet {
  std::vector<OccurrenceList> episodes;

  std::size_t size() const noexcept { return episodes.size(); }
  bool empty() const noexcept { return episodes.empty(); }
  auto begin() const noexcept { return episodes.begin(); }
  auto end() const noexcept { return episodes.end(); }
  const OccurrenceList& operator[](std::size_t i) const { return episodes[i]; }
};

// Windows of prefix -j-> A for every j in [1, max_gap]; slot 0 stays empty.
using GapSlots = std::vector<std::vector<OccurrenceWindow>>;

// 1-node occurrence lists of every type present in seq, ordered by type id,
// keeping only types with at least min_count occurrences.
inline std::vector<OccurrenceList> single_node_lists(const EventSequence& seq,
                                                     std::size_t min_count = 1) {
  std::vector<OccurrenceList> ones;
  for (EventType t = 0; t < seq.alphabet().size(); ++t)
    if (seq.times_of(t).size() >= std::max<std::size_t>(min_count, 1))
      ones.push_back(single_occurrences(seq, t));
  return ones;
}

inline GapSlots find_lists(const OccurrenceList& prefix, const OccurrenceList& single,
                           Time max_gap) {
  GapSlots slots(static_cast<std::size_t>(max_gap) + 1);
  const auto& times = single.windows;
  for (const OccurrenceWindow& w : prefix.windows) {
    // First occurrence of the single strictly after the prefix window end.
    auto it = std::upper_bound(times.begin(), times.end(), w.end,
                               [](Time t, const OccurrenceWindow& o) { return t < o.start; });
    for (; it != times.end() && it->start - w.end <= max_gap; ++it)
      slots[static_cast<std::size_t>(it->start - w.end)].push_back({w.start, it->start});
  }
  return slots;
}

inline OccurrenceList extend_episode(const OccurrenceList& prefix, EventType type, Time gap,
                                     std::vector<OccurrenceWindow> windows) {
  OccurrenceList out{prefix.episode, std::move(windows)};
  out.episode.types.push_back(type);
  out.episode.gaps.push_back(gap);
  return out;
}

// Appends every frequent right extension of prefix (recursively) to out.
inline void explore_dfs(const OccurrenceList& prefix, std::span<const OccurrenceList> ones,
                        const MinerConfig& cfg, std::size_t min_count, CandidateSet& out) {
  if (!cfg.may_grow(prefix.episode.size())) return;
  for (const OccurrenceList& single : ones) {
    const EventType type = single.episode.types.front();
    if (prefix.episode.contains_type(type)) continue;
    GapSlots slots = find_lists(prefix, single, cfg.max_gap);
    for (Time j = 1; j <= cfg.max_gap; ++j) {
      auto& slot = slots[static_cast<std::size_t>(j)];
      if (slot.size() < min_count) continue;
      out.episodes.push_back(extend_episode(prefix, type, j, std::move(slot)));
      // Copy: out.episodes may reallocate during the recursion.
      const OccurrenceList grown = out.episodes.back();
      explore_dfs(grown, ones, cfg, min_count, out);
    }
  }
}

namespace detail {

// Runs work(i, out_i) for i in [0, count), split over up to `threads`
// workers, and concatenates the outputs in index order.
template <typename Work>
CandidateSet fan_out(std::size_t count, unsigned threads, Work work) {
  CandidateSet merged;
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i, merged);
    return merged;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::future<std::vector<CandidateSet>>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [=, &work] {
      std::vector<CandidateSet> parts;
      for (std::size_t i = w; i < count; i += workers) {
        parts.emplace_back();
        work(i, parts.back());
      }
      return parts;
    }));
  }
  std::vector<std::vector<CandidateSet>> results;
  for (auto& j : jobs) results.push_back(j.get());
  for (std::size_t i = 0; i < count; ++i) {
    auto& part = results[i % workers][i / workers];
    for (auto& e : part.episodes) merged.episodes.push_back(std::move(e));
  }
  return merged;
}

}  // namespace detail

// Every injective fixed-interval episode (including 1-node ones) with at
// least cfg.threshold_count(|seq|) occurrences and gaps <= cfg.max_gap.
// Output is in depth-first order per starting type.
inline CandidateSet mine_episodes(const EventSequence& seq, const MinerConfig& cfg) {
  cfg.validate();
  if (seq.empty()) return {};
  const std::size_t min_count = cfg.threshold_count(seq.size());
  const std::vector<OccurrenceList> ones = single_node_lists(seq, min_count);
  return detail::fan_out(ones.size(), cfg.threads, [&](std::size_t i, CandidateSet& out) {
    out.episodes.push_back(ones[i]);
    explore_dfs(ones[i], ones, cfg, min_count, out);
  });
}

// The single most frequent extension of prefix, or nullopt when none reaches
// ceil((2(k+1)+1)/k) occurrences. Ties: smaller gap, then smaller type id.
inline std::optional<OccurrenceList> extend_best(const OccurrenceList& prefix,
                                                 std::span<const OccurrenceList> ones,
                                                 Time max_gap) {
  const std::size_t k = prefix.episode.size();
  const std::size_t bar = (2 * (k + 1) + 1 + k - 1) / k;
  std::optional<OccurrenceList> best;
  std::size_t best_freq = 0;
  Time best_gap = 0;
  for (const OccurrenceList& single : ones) {
    const EventType type = single.episode.types.front();
    if (prefix.episode.contains_type(type)) continue;
    GapSlots slots = find_lists(prefix, single, max_gap);
    Time gap = 1;
    for (Time j = 2; j <= max_gap; ++j)
      if (slots[static_cast<std::size_t>(j)].size() > slots[static_cast<std::size_t>(gap)].size())
        gap = j;
    const std::size_t freq = slots[static_cast<std::size_t>(gap)].size();
    if (freq < bar) continue;
    if (!best || freq > best_freq || (freq == best_freq && gap < best_gap)) {
      best = extend_episode(prefix, type, gap, std::move(slots[static_cast<std::size_t>(gap)]));
      best_freq = freq;
      best_gap = gap;
    }
  }
  return best;
}

// Greedy right-extension from every 1-node episode; the terminal episode is
// kept when it has at least two nodes and a positive score. At most one
// candidate per event type present in seq.
inline CandidateSet best_extensions(const EventSequence& seq, const MinerConfig& cfg) {
  cfg.validate();
  if (seq.empty()) return {};
  const std::vector<OccurrenceList> ones = single_node_lists(seq);
  return detail::fan_out(ones.size(), cfg.threads, [&](std::size_t i, CandidateSet& out) {
    OccurrenceList patt = ones[i];
    while (cfg.may_grow(patt.episode.size())) {
      auto next = extend_best(patt, ones, cfg.max_gap);
      if (!next) break;
      patt = std::move(*next);
    }
    if (patt.episode.size() > 1 && score(patt.episode.size(), patt.frequency()) > 0)
      out.episodes.push_back(std::move(patt));
  });
}

}  // namespace cse
