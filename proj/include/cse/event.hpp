#pragma once

// Event sequences, injective fixed-interval serial episodes and their
// occurrence lists. Everything downstream (mining, overlap counting,
// selection, coding) works on the types in this header.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cse/error.hpp"

namespace cse {

using EventType = std::uint32_t;
using Time = std::int64_t;

struct Event {
  EventType type = 0;
  Time time = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

// Canonical order: by time, then by type id.
inline bool canonical_less(const Event& a, const Event& b) noexcept {
  return a.time != b.time ? a.time < b.time : a.type < b.type;
}

// Dense interning of symbol names. Ids are assigned in insertion order.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names) {
    for (auto& n : names) intern(n);
  }

  EventType intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    if (name.empty()) throw InvalidArgument("empty event-type name");
    const auto id = static_cast<EventType>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<EventType> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(EventType id) const {
    if (id >= names_.size())
      throw InvalidArgument("event type id " + std::to_string(id) +
                            " outside alphabet of size " +
                            std::to_string(names_.size()));
    return names_[id];
  }

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, EventType> index_;
};

// Immutable, validated event sequence. Events are kept in canonical order
// (time, then type id) and indexed per type for O(log n) membership tests.
class EventSequence {
 public:
  EventSequence() : alphabet_(std::make_shared<const Alphabet>()) {}

  // Requires non-decreasing time stamps. Equal-time runs are reordered by
  // type id. Throws InvalidArgument on negative times, unknown type ids or
  // duplicate (type, time) pairs.
  EventSequence(std::vector<Event> events,
                std::shared_ptr<const Alphabet> alphabet)
      : events_(std::move(events)), alphabet_(std::move(alphabet)) {
    if (!alphabet_) alphabet_ = std::make_shared<const Alphabet>();
    for (std::size_t i = 0; i < events_.size(); ++i) {
      const Event& e = events_[i];
      if (e.time < 0)
        throw InvalidArgument("event " + std::to_string(i) +
                              " has negative time " + std::to_string(e.time));
      if (e.type >= alphabet_->size())
        throw InvalidArgument("event " + std::to_string(i) +
                              " has unknown type id " + std::to_string(e.type));
      if (i > 0 && e.time < events_[i - 1].time)
        throw InvalidArgument("time stamps decrease at event " +
                              std::to_string(i));
    }
    canonicalize_runs();
    build_index();
  }

  // Sorts arbitrary input into canonical order first. When drop_duplicates
  // is set repeated (type, time) pairs collapse to one event, otherwise they
  // are rejected.
  static EventSequence from_unordered(std::vector<Event> events,
                                      std::shared_ptr<const Alphabet> alphabet,
                                      bool drop_duplicates = false) {
    std::sort(events.begin(), events.end(), canonical_less);
    if (drop_duplicates)
      events.erase(std::unique(events.begin(), events.end()), events.end());
    return EventSequence(std::move(events), std::move(alphabet));
  }

  std::span<const Event> events() const noexcept { return events_; }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const std::shared_ptr<const Alphabet>& alphabet_ptr() const noexcept {
    return alphabet_;
  }

  // Strictly increasing occurrence times of one type; empty if absent.
  std::span<const Time> times_of(EventType type) const noexcept {
    if (type >= by_type_.size()) return {};
    return by_type_[type];
  }

  bool contains(EventType type, Time time) const noexcept {
    auto times = times_of(type);
    return std::binary_search(times.begin(), times.end(), time);
  }

  // Number of event types that actually occur.
  std::size_t distinct_types() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        by_type_.begin(), by_type_.end(),
        [](const auto& v) { return !v.empty(); }));
  }

  friend bool operator==(const EventSequence& a, const EventSequence& b) {
    return a.events_ == b.events_ && *a.alphabet_ == *b.alphabet_;
  }

 private:
  void canonicalize_runs() {
    auto it = events_.begin();
    while (it != events_.end()) {
      auto run_end = std::find_if(it, events_.end(), [t = it->time](const Event& e) {
        return e.time != t;
      });
      std::sort(it, run_end, canonical_less);
      for (auto j = it; j + 1 < run_end; ++j)
        if (j->type == (j + 1)->type)
          throw InvalidArgument("duplicate event (" + alphabet_->name(j->type) +
                                ", " + std::to_string(j->time) + ")");
      it = run_end;
    }
  }

  void build_index() {
    by_type_.assign(alphabet_->size(), {});
    for (const Event& e : events_) by_type_[e.type].push_back(e.time);
  }

  std::vector<Event> events_;
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<std::vector<Time>> by_type_;
};

// e_1 -Δ_1-> e_2 -Δ_2-> ... -> e_k with pairwise distinct types.
struct Episode {
  std::vector<EventType> types;
  std::vector<Time> gaps;

  static Episode single(EventType type) { return Episode{{type}, {}}; }

  std::size_t size() const noexcept { return types.size(); }

  // Offset of node j from the start of an occurrence.
  Time offset(std::size_t j) const noexcept {
    return std::accumulate(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(j),
                           Time{0});
  }
  Time span() const noexcept { return offset(gaps.size()); }

  bool contains_type(EventType t) const noexcept {
    return std::find(types.begin(), types.end(), t) != types.end();
  }

  // Throws InvalidArgument unless k >= 1, gaps.size() == k-1, types are
  // pairwise distinct and every gap lies in [1, max_gap].
  void validate(std::optional<Time> max_gap = std::nullopt) const {
    if (types.empty()) throw InvalidArgument("episode has no nodes");
    if (gaps.size() + 1 != types.size())
      throw InvalidArgument("episode with " + std::to_string(types.size()) +
                            " nodes needs " + std::to_string(types.size() - 1) +
                            " gaps, got " + std::to_string(gaps.size()));
    for (Time g : gaps) {
      if (g < 1) throw InvalidArgument("episode gap must be positive");
      if (max_gap && g > *max_gap)
        throw InvalidArgument("episode gap " + std::to_string(g) +
                              " exceeds maximum " + std::to_string(*max_gap));
    }
    auto sorted = types;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidArgument("episode is not injective");
  }

  friend bool operator==(const Episode&, const Episode&) = default;
  friend auto operator<=>(const Episode&, const Episode&) = default;
};

struct EpisodeHash {
  std::size_t operator()(const Episode& e) const noexcept {
    std::size_t h = e.types.size();
    auto mix = [&h](std::uint64_t v) {
      h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (auto t : e.types) mix(t);
    for (auto g : e.gaps) mix(static_cast<std::uint64_t>(g));
    return h;
  }
};

struct OccurrenceWindow {
  Time start = 0;
  Time end = 0;

  friend bool operator==(const OccurrenceWindow&, const OccurrenceWindow&) = default;
  friend auto operator<=>(const OccurrenceWindow&, const OccurrenceWindow&) = default;
};

// All occurrences of one episode, sorted by strictly increasing start.
struct OccurrenceList {
  Episode episode;
  std::vector<OccurrenceWindow> windows;

  std::size_t frequency() const noexcept { return windows.size(); }

  std::vector<Time> starts() const {
    std::vector<Time> out;
    out.reserve(windows.size());
    for (const auto& w : windows) out.push_back(w.start);
    return out;
  }

  friend bool operator==(const OccurrenceList&, const OccurrenceList&) = default;
};

// The k events of the occurrence of `episode` beginning at `start`.
inline std::vector<Event> roll_out(const Episode& episode, Time start) {
  std::vector<Event> out;
  out.reserve(episode.size());
  Time t = start;
  for (std::size_t j = 0; j < episode.size(); ++j) {
    if (j > 0) t += episode.gaps[j - 1];
    out.push_back(Event{episode.types[j], t});
  }
  return out;
}

inline bool verify_occurrence(const EventSequence& seq, const Episode& episode,
                              Time start) {
  Time t = start;
  for (std::size_t j = 0; j < episode.size(); ++j) {
    if (j > 0) t += episode.gaps[j - 1];
    if (!seq.contains(episode.types[j], t)) return false;
  }
  return true;
}

// Occurrence list of the 1-node episode of `type`.
inline OccurrenceList single_occurrences(const EventSequence& seq, EventType type) {
  OccurrenceList list{Episode::single(type), {}};
  auto times = seq.times_of(type);
  list.windows.reserve(times.size());
  for (Time t : times) list.windows.push_back({t, t});
  return list;
}

// "A -2-> B -1-> C"
inline std::string format_episode(const Episode& e, const Alphabet& alphabet) {
  std::string out;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (j > 0) out += " -" + std::to_string(e.gaps[j - 1]) + "-> ";
    out += alphabet.name(e.types[j]);
  }
  return out;
}

}  // namespace cse
