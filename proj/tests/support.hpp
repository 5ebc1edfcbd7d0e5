#pragma once

// Shared fixtures, random instance generators and brute-force oracles. The
// oracles use only std containers and arithmetic so they stay independent
// of the library code paths they check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cse/cse.hpp"

namespace cse::testing {

inline EventSequence make_sequence(const std::vector<std::string>& alphabet,
                                   const std::vector<std::pair<std::string, Time>>& events) {
  auto a = std::make_shared<Alphabet>(alphabet);
  std::vector<Event> ev;
  for (const auto& [name, t] : events) ev.push_back(Event{a->intern(name), t});
  return EventSequence::from_unordered(std::move(ev), a);
}

inline const std::vector<std::string>& abcde() {
  static const std::vector<std::string> names{"A", "B", "C", "D", "E"};
  return names;
}

// D1 from the worked occurrence example.
inline EventSequence d1() {
  return make_sequence(abcde(), {{"A", 1}, {"A", 2}, {"B", 3}, {"E", 4}, {"A", 5}, {"B", 6},
                                 {"C", 6}, {"B", 7}, {"D", 8}, {"C", 10}, {"E", 11}});
}

// D2, the sequence behind the worked encoding table.
inline EventSequence d2() {
  return make_sequence(abcde(), {{"D", 1}, {"A", 2}, {"C", 3}, {"E", 3}, {"A", 4}, {"B", 4}, {"C", 5},
                                 {"D", 5}, {"B", 6}, {"C", 7}, {"E", 7}, {"C", 8}, {"C", 9}});
}

inline Episode ep(std::vector<EventType> types, std::vector<Time> gaps = {}) {
  return Episode{std::move(types), std::move(gaps)};
}

// A=0 B=1 C=2 D=3 E=4
constexpr EventType A = 0, B = 1, C = 2, D = 3, E = 4;

// The three-row worked encoding of D2.
inline SelectedModel table1_model() {
  const auto seq = d2();
  std::vector<DictionaryEntry> dict{{ep({A, B, C}, {2, 1}), std::vector<Time>{2, 4}},
                                    {ep({D, E, C}, {2, 2}), std::vector<Time>{1, 5}}};
  return cover_with(seq, dict);
}

struct RandomSpec {
  std::size_t length = 30;
  std::size_t alphabet = 4;
  // Time step between consecutive draws is uniform in [min_step, max_step];
  // min_step 0 allows simultaneous events.
  Time min_step = 0;
  Time max_step = 2;
};

inline EventSequence random_sequence(const RandomSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < spec.alphabet; ++i) names.push_back("e" + std::to_string(i));
  auto a = std::make_shared<Alphabet>(names);
  std::uniform_int_distribution<Time> step(spec.min_step, spec.max_step);
  std::uniform_int_distribution<EventType> type(0, static_cast<EventType>(spec.alphabet - 1));
  std::set<std::pair<Time, EventType>> seen;
  std::vector<Event> ev;
  Time t = step(rng);
  while (ev.size() < spec.length) {
    const EventType ty = type(rng);
    if (seen.emplace(t, ty).second) ev.push_back(Event{ty, t});
    t += step(rng);
  }
  return EventSequence::from_unordered(std::move(ev), a);
}

// Occurrence windows of every injective fixed-gap episode with at most
// max_len nodes, gaps in [1, max_gap] and at least min_count occurrences,
// found by exhaustive enumeration.
inline std::map<Episode, std::vector<OccurrenceWindow>> brute_force_mine(const EventSequence& seq, Time max_gap,
                                                                        std::size_t max_len,
                                                                        std::size_t min_count) {
  std::set<std::pair<EventType, Time>> present;
  std::set<EventType> types;
  std::set<Time> times;
  for (const Event& e : seq.events()) {
    present.emplace(e.type, e.time);
    types.insert(e.type);
    times.insert(e.time);
  }
  std::map<Episode, std::vector<OccurrenceWindow>> out;
  std::vector<EventType> ty;
  std::vector<Time> gaps;

  auto count = [&] {
    std::vector<OccurrenceWindow> windows;
    for (Time s : times) {
      Time t = s;
      bool ok = present.contains({ty[0], t});
      for (std::size_t j = 1; ok && j < ty.size(); ++j) {
        t += gaps[j - 1];
        ok = present.contains({ty[j], t});
      }
      if (ok) windows.push_back({s, t});
    }
    if (!windows.empty() && windows.size() >= min_count) out[Episode{ty, gaps}] = windows;
  };

  auto rec = [&](auto&& self) -> void {
    count();
    if (ty.size() == max_len) return;
    for (EventType next : types) {
      if (std::find(ty.begin(), ty.end(), next) != ty.end()) continue;
      for (Time g = 1; g <= max_gap; ++g) {
        ty.push_back(next);
        gaps.push_back(g);
        self(self);
        ty.pop_back();
        gaps.pop_back();
      }
    }
  };
  for (EventType first : types) {
    ty = {first};
    gaps.clear();
    rec(rec);
  }
  return out;
}

// Pairwise counts of events covered by occurrences of both candidates,
// found by materialising every occurrence.
inline std::vector<std::vector<std::uint64_t>> brute_force_overlap(const CandidateSet& candidates) {
  const std::size_t n = candidates.size();
  std::map<std::pair<EventType, Time>, std::set<std::size_t>> owners;
  for (std::size_t c = 0; c < n; ++c) {
    const Episode& e = candidates[c].episode;
    for (const auto& w : candidates[c].windows) {
      Time t = w.start;
      for (std::size_t j = 0; j < e.types.size(); ++j) {
        if (j > 0) t += e.gaps[j - 1];
        owners[{e.types[j], t}].insert(c);
      }
    }
  }
  std::vector<std::vector<std::uint64_t>> om(n, std::vector<std::uint64_t>(n, 0));
  for (const auto& [event, who] : owners)
    for (std::size_t a : who)
      for (std::size_t b : who)
        if (a != b) ++om[a][b];
  return om;
}

// Total unit length of covering seq with `chosen` (all their occurrences)
// plus singletons for the rest, computed from first principles.
inline std::int64_t brute_force_cover_length(const EventSequence& seq, const std::vector<OccurrenceList>& chosen) {
  std::set<std::pair<EventType, Time>> covered;
  std::int64_t total = 0;
  for (const auto& c : chosen) {
    total += 2 * static_cast<std::int64_t>(c.episode.size()) + static_cast<std::int64_t>(c.windows.size()) + 1;
    for (const auto& w : c.windows) {
      Time t = w.start;
      for (std::size_t j = 0; j < c.episode.size(); ++j) {
        if (j > 0) t += c.episode.gaps[j - 1];
        covered.emplace(c.episode.types[j], t);
      }
    }
  }
  std::map<EventType, std::int64_t> residual;
  for (const Event& e : seq.events())
    if (!covered.contains({e.type, e.time})) ++residual[e.type];
  for (const auto& [t, n] : residual) total += 3 + n;
  return total;
}

// Independent bit-length calculator for the bit format: M, then per row
// size, fixed-width types, gaps, count and starts, every Elias value + 1.
inline std::uint64_t reference_bit_length(const CodeTable& table, bool delta) {
  auto gamma = [](std::uint64_t n) {
    std::uint64_t lg = 0;
    while ((n >> (lg + 1)) != 0) ++lg;
    return 2 * lg + 1;
  };
  const std::uint64_t m = table.alphabet_size();
  std::uint64_t width = 0;
  while ((std::uint64_t{1} << width) <= m) ++width;
  if (width == 0) width = 1;
  std::uint64_t bits = gamma(m + 1);
  for (const auto& r : table.rows) {
    bits += gamma(r.size + 1) + r.size * width;
    for (Time g : r.episode.gaps) bits += gamma(static_cast<std::uint64_t>(g) + 1);
    bits += gamma(r.occ_count + 1);
    for (std::size_t i = 0; i < r.starts.size(); ++i) {
      const Time v = (delta && i > 0) ? r.starts[i] - r.starts[i - 1] : r.starts[i];
      bits += gamma(static_cast<std::uint64_t>(v) + 1);
    }
  }
  return bits;
}

// Sequence built from `reps` disjoint occurrences of `pattern` laid end to
// end `spacing` apart, plus `noise` events of fresh types at free times.
inline EventSequence planted_sequence(std::size_t reps, std::size_t noise, std::uint64_t seed) {
  std::vector<std::string> names{"A", "B", "C"};
  for (std::size_t i = 0; i < noise; ++i) names.push_back("n" + std::to_string(i));
  auto a = std::make_shared<Alphabet>(names);
  std::vector<Event> ev;
  Time t = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    ev.push_back({0, t});
    ev.push_back({1, t + 1});
    ev.push_back({2, t + 2});
    t += 10;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Time> when(0, t);
  for (std::size_t i = 0; i < noise; ++i) ev.push_back({static_cast<EventType>(3 + i), when(rng)});
  return EventSequence::from_unordered(std::move(ev), a);
}

}  // namespace cse::testing
