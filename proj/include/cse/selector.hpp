#pragma once

// Greedy MDL subset selection (the mine / score / delete loop) for both
// candidate generators.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "cse/event.hpp"
#include "cse/miner.hpp"
#include "cse/overlap.hpp"
#include "cse/score.hpp"

namespace cse {

enum class Algorithm { kCsc1, kCsc2 };

struct SelectionConfig {
  // Cap on selected multi-node episodes; nullopt is unbounded.
  std::optional<std::size_t> max_patterns;
  Algorithm algorithm = Algorithm::kCsc2;
  MinerConfig miner;

  void validate() const {
    if (max_patterns && *max_patterns == 0)
      throw InvalidArgument("max patterns must be at least 1 (omit it for unbounded)");
    miner.validate();
  }
};

struct Singleton {
  EventType type = 0;
  std::vector<Time> times;

  friend bool operator==(const Singleton&, const Singleton&) = default;
};

// Selected multi-node episodes in admission order plus the 1-node rows that
// cover whatever they leave over.
struct SelectedModel {
  std::vector<OccurrenceList> episodes;
  // overlap-score of each episode at the moment it was admitted.
  std::vector<std::int64_t> admission_scores;
  std::vector<Singleton> singletons;
  std::shared_ptr<const Alphabet> alphabet = std::make_shared<const Alphabet>();

  // L(H) + L(D|H) in integer units, summed row by row.
  std::int64_t unit_total() const {
    std::int64_t total = 0;
    for (const auto& e : episodes)
      total += 2 * static_cast<std::int64_t>(e.episode.size()) +
               static_cast<std::int64_t>(e.frequency()) + 1;
    for (const auto& s : singletons) total += 2 + static_cast<std::int64_t>(s.times.size()) + 1;
    return total;
  }
};

inline std::int64_t overlap_score(const CandidateSet& candidates, std::size_t candidate,
                                  std::span<const std::size_t> selected,
                                  const OverlapMatrix& om) {
  const auto& c = candidates[candidate];
  return score(c.episode.size(), c.frequency()) -
         static_cast<std::int64_t>(om.row_sum(candidate, selected));
}

// Removes every event of every admitted occurrence; shared events go once.
inline EventSequence delete_occurrences(const EventSequence& seq,
                                        std::span<const OccurrenceList> admitted) {
  if (admitted.empty()) return seq;
  struct Hash {
    std::size_t operator()(const Event& e) const noexcept {
      return std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(e.time) * 1000003ULL ^ e.type);
    }
  };
  std::unordered_set<Event, Hash> covered;
  for (const auto& list : admitted)
    for (const auto& w : list.windows)
      for (const Event& e : roll_out(list.episode, w.start)) covered.insert(e);
  std::vector<Event> kept;
  kept.reserve(seq.size());
  for (const Event& e : seq.events())
    if (!covered.contains(e)) kept.push_back(e);
  return EventSequence(std::move(kept), seq.alphabet_ptr());
}

// Residual events grouped into one 1-node row per present type.
inline std::vector<Singleton> singleton_rows(const EventSequence& seq) {
  std::vector<Singleton> rows;
  for (EventType t = 0; t < seq.alphabet().size(); ++t) {
    auto times = seq.times_of(t);
    if (!times.empty()) rows.push_back(Singleton{t, {times.begin(), times.end()}});
  }
  return rows;
}

namespace detail {

// Argmax ordering among equal overlap-scores: longer first, then the
// smaller interleaved (type, gap, type, ...) tuple.
inline bool prefer(const Episode& a, const Episode& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a.types[j] != b.types[j]) return a.types[j] < b.types[j];
    if (j < a.gaps.size() && a.gaps[j] != b.gaps[j]) return a.gaps[j] < b.gaps[j];
  }
  return false;
}

inline CandidateSet generate_candidates(const EventSequence& seq, const SelectionConfig& cfg) {
  CandidateSet c = cfg.algorithm == Algorithm::kCsc1 ? mine_episodes(seq, cfg.miner)
                                                     : best_extensions(seq, cfg.miner);
  // 1-node episodes always score -3 and are never admitted.
  std::erase_if(c.episodes, [](const OccurrenceList& l) { return l.episode.size() < 2; });
  return c;
}

}  // namespace detail

inline SelectedModel select(const EventSequence& input, const SelectionConfig& cfg) {
  cfg.validate();
  SelectedModel model;
  model.alphabet = input.alphabet_ptr();
  const std::size_t cap = cfg.max_patterns.value_or(SIZE_MAX);

  EventSequence seq = input;
  bool covering_exists = true;
  while (covering_exists && model.episodes.size() < cap) {
    const CandidateSet candidates = detail::generate_candidates(seq, cfg);
    if (candidates.empty()) break;
    const OverlapMatrix om = find_overlap_matrix(seq, candidates);

    std::vector<std::size_t> picked;
    std::vector<char> taken(candidates.size(), 0);
    for (;;) {
      std::optional<std::size_t> best;
      std::int64_t best_score = 0;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (taken[c]) continue;
        const std::int64_t s = overlap_score(candidates, c, picked, om);
        if (!best || s > best_score ||
            (s == best_score && detail::prefer(candidates[c].episode, candidates[*best].episode))) {
          best = c;
          best_score = s;
        }
      }
      if (!best || best_score <= 0) {
        if (picked.empty()) covering_exists = false;
        break;
      }
      taken[*best] = 1;
      picked.push_back(*best);
      model.admission_scores.push_back(best_score);
      if (model.episodes.size() + picked.size() == cap) break;
    }
    if (picked.empty()) break;

    std::vector<OccurrenceList> admitted;
    for (std::size_t c : picked) admitted.push_back(candidates[c]);
    seq = delete_occurrences(seq, admitted);
    for (auto& a : admitted) model.episodes.push_back(std::move(a));
  }
  model.singletons = singleton_rows(seq);
  return model;
}

// A fixed dictionary entry; without starts it takes every occurrence.
struct DictionaryEntry {
  Episode episode;
  std::optional<std::vector<Time>> starts;
};

// Covers seq with a given dictionary (occurrences may overlap) and completes
// the cover with singletons. Pinned starts must be real occurrences.
inline SelectedModel cover_with(const EventSequence& seq, std::span<const DictionaryEntry> dictionary) {
  SelectedModel model;
  model.alphabet = seq.alphabet_ptr();
  for (const auto& entry : dictionary) {
    entry.episode.validate();
    for (EventType t : entry.episode.types)
      if (t >= seq.alphabet().size()) throw InvalidArgument("dictionary episode uses unknown type id");
    std::vector<Time> starts;
    if (entry.starts) {
      starts = *entry.starts;
      std::sort(starts.begin(), starts.end());
      starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
      for (Time s : starts)
        if (!verify_occurrence(seq, entry.episode, s))
          throw InvalidArgument(format_episode(entry.episode, seq.alphabet()) + " does not occur at " +
                                std::to_string(s));
    } else {
      for (Time s : seq.times_of(entry.episode.types.front()))
        if (verify_occurrence(seq, entry.episode, s)) starts.push_back(s);
    }
    OccurrenceList list{entry.episode, {}};
    for (Time s : starts) list.windows.push_back({s, s + entry.episode.span()});
    model.episodes.push_back(std::move(list));
  }
  model.singletons = singleton_rows(delete_occurrences(seq, model.episodes));
  return model;
}

}  // namespace cse
