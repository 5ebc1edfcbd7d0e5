#pragma once

// Trace generator for composable conveyor systems. Packages arrive on each
// input path as a Poisson process and emit one (unit, time) event per unit
// hand-off; consecutive events of a package are separated by the dwell time
// of the unit being entered.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cse/event.hpp"
#include "cse/seq_io.hpp"

namespace cse {

struct DwellDefaults {
  Time input = 1;
  Time segment = 2;
  Time turn = 3;
  Time output = 1;

  Time for_unit(std::string_view unit) const {
    switch (unit.empty() ? '?' : unit.front()) {
      case 'I': return input;
      case 'S': return segment;
      case 'T': return turn;
      case 'O': return output;
      default: return segment;
    }
  }
};

struct Topology {
  std::string name;
  // Every unit of the system, including ones no path crosses.
  std::vector<std::string> units;
  std::vector<std::vector<std::string>> paths;
  std::map<std::string, Time> transit_times;
  // Packages per time unit on each input path.
  double arrival_rate = 0.0;
  // Trace ticks per arrival time unit. Transit times are in ticks.
  Time ticks_per_unit = 1;

  Time transit(const std::string& unit) const {
    auto it = transit_times.find(unit);
    if (it == transit_times.end()) throw InvalidArgument("unit '" + unit + "' has no transit time");
    return it->second;
  }

  void validate() const {
    const std::set<std::string> known(units.begin(), units.end());
    if (known.size() != units.size()) throw InvalidArgument("topology lists a unit twice");
    if (!(arrival_rate >= 0.0)) throw InvalidArgument("arrival rate must be non-negative");
    if (ticks_per_unit < 1) throw InvalidArgument("ticks per time unit must be at least 1");
    for (std::size_t p = 0; p < paths.size(); ++p) {
      const auto& path = paths[p];
      const std::string id = "path P" + std::to_string(p + 1);
      if (path.size() < 2) throw InvalidArgument(id + " needs at least an input and an output");
      if (path.front().front() != 'I') throw InvalidArgument(id + " must start at an input");
      if (path.back().front() != 'O') throw InvalidArgument(id + " must end at an output");
      for (const auto& u : path)
        if (!known.contains(u)) throw InvalidArgument(id + " uses unknown unit '" + u + "'");
    }
    for (const auto& u : units)
      if (transit(u) < 1) throw InvalidArgument("transit time of '" + u + "' must be at least 1");
  }
};

// Tick resolution of the built-in layouts. At the listed rates packages
// rarely overlap in time and well under 1% are delayed by a clash.
inline constexpr Time kBuiltinTicksPerUnit = 1000;

namespace detail {

inline Topology make_topology(std::string name, double rate,
                              std::initializer_list<std::string_view> paths,
                              std::initializer_list<std::string_view> off_path_units,
                              const DwellDefaults& dwell) {
  Topology t;
  t.name = std::move(name);
  t.arrival_rate = rate;
  t.ticks_per_unit = kBuiltinTicksPerUnit;
  std::set<std::string> seen;
  auto add_unit = [&](const std::string& u) {
    if (seen.insert(u).second) {
      t.units.push_back(u);
      t.transit_times[u] = dwell.for_unit(u);
    }
  };
  for (auto p : paths) {
    std::vector<std::string> path;
    for (auto u : split_ws(p)) path.emplace_back(u);
    for (const auto& u : path) add_unit(u);
    t.paths.push_back(std::move(path));
  }
  for (auto u : off_path_units) add_unit(std::string(u));
  return t;
}

}  // namespace detail

inline std::vector<std::string> builtin_topology_names() { return {"2I-2O", "3I-3O", "PackageSorter"}; }

// The three reference layouts. Units that no listed path crosses are still
// part of the system and count towards its alphabet.
inline Topology builtin_topology(std::string_view name, const DwellDefaults& dwell = {}) {
  if (name == "2I-2O")
    return detail::make_topology("2I-2O", 0.6,
                                 {"I1 S1 T1 S4 T3 S7 T4 S8 O2", "I2 S6 T3 S7 T4 S5 T2 S3 O1"}, {"S2"},
                                 dwell);
  if (name == "3I-3O")
    return detail::make_topology("3I-3O", 0.4,
                                 {"I1 S1 T1 S4 T3 S12 T7 S16 T8 S17 T9 S18 O3",
                                  "I2 S6 T3 S7 T4 S5 T2 S3 T5 S9 O1",
                                  "I3 S15 T7 S16 T8 S17 T9 S14 T6 S11 O2"},
                                 {"S2", "S8", "S10", "S13"}, dwell);
  if (name == "PackageSorter")
    return detail::make_topology(
        "PackageSorter", 0.2,
        {"I1 S39 T13 S32 S33 S34 T14 S28 S25 S22 T8 S19 T9 S20 T10 S21 T11 S24 T12 S27 O2",
         "I2 S31 T13 S32 S33 S34 T14 S35 T15 S36 S37 S38 T16 S40 O3",
         "I3 S16 T6 S17 T7 S13 T3 S5 S6 S7 S8 S9 T4 S10 T5 S11 O1",
         "I4 S2 T1 S3 T2 S4 T3 S5 S6 S7 S8 S9 T4 S10 T5 S15 T11 S24 T12 S27 O2",
         "I5 S1 T1 S3 T2 S12 T6 S17 T7 S18 T8 S19 T9 S23 S26 S29 T15 S36 S37 S38 T16 S40 O3"},
        {"S14", "S30"}, dwell);
  throw InvalidArgument("unknown topology '" + std::string(name) + "'");
}

// Topology file:
//   name <text>
//   rate <poisson rate>
//   scale <ticks per time unit>   (default 1)
//   units <unit> ...          (optional, for units no path crosses)
//   path <unit> <unit> ...    (one line per path)
//   transit <unit> <time>     (overrides the per-kind default)
inline Topology read_topology(std::istream& in, const DwellDefaults& dwell = {}) {
  Topology t;
  std::set<std::string> seen;
  auto add_unit = [&](std::string_view u) {
    if (seen.insert(std::string(u)).second) {
      t.units.emplace_back(u);
      t.transit_times.emplace(std::string(u), dwell.for_unit(u));
    }
  };
  std::map<std::string, Time> overrides;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::trim(line);
    if (body.empty() || body[0] == '#') continue;
    auto tok = detail::split_ws(body);
    const auto key = tok[0];
    if (key == "name" && tok.size() >= 2) {
      t.name = std::string(body.substr(body.find(tok[1])));
    } else if (key == "rate" && tok.size() == 2) {
      std::istringstream rs{std::string(tok[1])};
      if (!(rs >> t.arrival_rate)) throw ParseError("bad rate", lineno);
    } else if (key == "scale" && tok.size() == 2) {
      auto v = detail::parse_time(tok[1]);
      if (!v) throw ParseError("bad scale", lineno);
      t.ticks_per_unit = *v;
    } else if (key == "units") {
      for (std::size_t i = 1; i < tok.size(); ++i) add_unit(tok[i]);
    } else if (key == "path" && tok.size() >= 3) {
      std::vector<std::string> path;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        add_unit(tok[i]);
        path.emplace_back(tok[i]);
      }
      t.paths.push_back(std::move(path));
    } else if (key == "transit" && tok.size() == 3) {
      auto v = detail::parse_time(tok[2]);
      if (!v) throw ParseError("bad transit time", lineno);
      overrides[std::string(tok[1])] = *v;
    } else {
      throw ParseError("unrecognized topology line", lineno);
    }
  }
  for (const auto& [u, v] : overrides) {
    if (!seen.contains(u)) throw ParseError("transit time for unknown unit '" + u + "'", 0);
    t.transit_times[u] = v;
  }
  t.validate();
  return t;
}

// Built-in name or path to a topology file.
inline Topology load_topology(const std::string& name_or_path, const DwellDefaults& dwell = {}) {
  const auto names = builtin_topology_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return builtin_topology(name_or_path, dwell);
  std::ifstream in(name_or_path);
  if (!in) throw InvalidArgument("unknown topology '" + name_or_path + "'");
  return read_topology(in, dwell);
}

enum class RateMode { kPerPath, kTotalSplit };

struct PackageRecord {
  std::size_t path = 0;
  Time birth = 0;
  // Hand-off times, one per unit of the path.
  std::vector<Time> times;
};

struct Trace {
  EventSequence sequence;
  std::vector<PackageRecord> packages;
  // Packages that entered later than their birth because of a clash.
  std::size_t delayed = 0;
};

// Offsets of each hand-off from a package's entry time.
inline std::vector<Time> path_offsets(const Topology& topo, const std::vector<std::string>& path) {
  std::vector<Time> off(path.size(), 0);
  for (std::size_t i = 1; i < path.size(); ++i) off[i] = off[i - 1] + topo.transit(path[i]);
  return off;
}

// Births are drawn per path from a Poisson process (exponential
// inter-arrivals in time units, scaled to ticks and floored) on
// [0, horizon) time units. Packages are
// placed in birth order; one that would emit an already-taken (unit, time)
// event enters one tick later, so gaps along every path stay exact.
inline Trace simulate(const Topology& topo, Time horizon, std::uint64_t seed,
                      RateMode mode = RateMode::kPerPath) {
  topo.validate();
  if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
  auto alphabet = std::make_shared<Alphabet>(topo.units);

  const double rate = mode == RateMode::kPerPath || topo.paths.empty()
                          ? topo.arrival_rate
                          : topo.arrival_rate / static_cast<double>(topo.paths.size());
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Time, std::size_t>> births;
  if (rate > 0.0) {
    for (std::size_t p = 0; p < topo.paths.size(); ++p) {
      std::exponential_distribution<double> gap(rate);
      double t = 0.0;
      for (;;) {
        t += gap(rng);
        if (t >= static_cast<double>(horizon)) break;
        births.emplace_back(static_cast<Time>(std::floor(t * static_cast<double>(topo.ticks_per_unit))), p);
      }
    }
  }
  std::stable_sort(births.begin(), births.end());

  std::vector<std::vector<EventType>> path_ids;
  std::vector<std::vector<Time>> offsets;
  for (const auto& path : topo.paths) {
    std::vector<EventType> ids;
    for (const auto& u : path) ids.push_back(*alphabet->find(u));
    path_ids.push_back(std::move(ids));
    offsets.push_back(path_offsets(topo, path));
  }

  struct Hash {
    std::size_t operator()(const Event& e) const noexcept {
      return std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(e.time) * 1000003ULL ^ e.type);
    }
  };
  std::unordered_set<Event, Hash> taken;
  Trace trace;
  std::vector<Event> events;
  for (auto [birth, p] : births) {
    const auto& ids = path_ids[p];
    const auto& off = offsets[p];
    Time entry = birth;
    auto clashes = [&](Time at) {
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (taken.contains(Event{ids[i], at + off[i]})) return true;
      return false;
    };
    while (clashes(entry)) ++entry;
    if (entry != birth) ++trace.delayed;
    PackageRecord rec{p, entry, {}};
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const Event e{ids[i], entry + off[i]};
      taken.insert(e);
      events.push_back(e);
      rec.times.push_back(e.time);
    }
    trace.packages.push_back(std::move(rec));
  }
  trace.sequence = EventSequence::from_unordered(std::move(events), alphabet);
  return trace;
}

// One line per package: "<path id> <entry time>", path ids 1-based.
inline void write_ground_truth(std::ostream& out, const Trace& trace) {
  out << "# path birth\n";
  for (const auto& p : trace.packages) out << "P" << p.path + 1 << ' ' << p.birth << '\n';
}

// Whether the episode's type list appears contiguously in some path. Gaps
// are not compared. Throws if the episode names a unit the topology lacks.
inline bool subpath_match(const Episode& episode, const Alphabet& alphabet, const Topology& topo) {
  std::vector<std::string> names;
  for (EventType t : episode.types) {
    const std::string& n = alphabet.name(t);
    if (std::find(topo.units.begin(), topo.units.end(), n) == topo.units.end())
      throw InvalidArgument("episode unit '" + n + "' is not part of topology " + topo.name);
    names.push_back(n);
  }
  if (names.empty()) return true;
  return std::any_of(topo.paths.begin(), topo.paths.end(), [&](const auto& path) {
    return std::search(path.begin(), path.end(), names.begin(), names.end()) != path.end();
  });
}

}  // namespace cse
