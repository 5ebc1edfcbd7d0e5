#pragma once

// Line-oriented text formats.
//
// Sequence file: one "<type> <time>" per line. Lines starting with '#' are
// comments, except "#alphabet: A B C" which fixes symbol ids up front.
//
// Corpus file: blocks separated by blank lines, each optionally headed by
// "#label: <name>". A block whose lines are all "<token> <integer>" is
// timed; any other block is a token stream stamped 1..n by position.
//
// Model file: one episode per line, "A 2 B 1 C", optionally followed by
// ": <start> <start> ..." to pin its occurrences.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cse/event.hpp"
#include "cse/selector.hpp"

namespace cse {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  auto tokens_begin = s.find_first_not_of(" \t\r\n");
  if (tokens_begin == std::string_view::npos) return {};
  auto tokens_end = s.find_last_not_of(" \t\r\n");
  return s.substr(tokens_begin, tokens_end - tokens_begin + 1);
}

inline std::optional<Time> parse_time(std::string_view s) {
  Time v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// Text after "#<key>:" when the (trimmed) line is that directive.
inline std::optional<std::string_view> directive(std::string_view line, std::string_view key) {
  line = trim(line);
  if (line.size() < key.size() + 2 || line[0] != '#') return std::nullopt;
  if (line.substr(1, key.size()) != key || line[key.size() + 1] != ':') return std::nullopt;
  return trim(line.substr(key.size() + 2));
}

inline void check_name(const std::string& n) {
  if (n.empty() || std::any_of(n.begin(), n.end(), [](unsigned char c) { return std::isspace(c); }) ||
      n[0] == '#')
    throw InvalidArgument("symbol '" + n + "' cannot be written to a text file");
}

struct RawEvent {
  std::string name;
  Time time;
  std::size_t line;
};

// Builds a sequence over `alphabet` from raw events, reporting order and
// duplicate violations against their source lines.
inline EventSequence assemble(const std::vector<RawEvent>& raw,
                              const std::shared_ptr<const Alphabet>& alphabet) {
  std::vector<Event> events;
  events.reserve(raw.size());
  std::set<EventType> at_time;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& r = raw[i];
    const EventType id = *alphabet->find(r.name);
    if (i > 0 && r.time < raw[i - 1].time) throw ParseError("time stamps decrease", r.line);
    if (i == 0 || r.time != raw[i - 1].time) at_time.clear();
    if (!at_time.insert(id).second)
      throw ParseError("duplicate event (" + r.name + ", " + std::to_string(r.time) + ")", r.line);
    events.push_back(Event{id, r.time});
  }
  return EventSequence(std::move(events), alphabet);
}

inline RawEvent parse_event_line(std::string_view line, std::size_t lineno) {
  auto tok = split_ws(line);
  if (tok.size() != 2) throw ParseError("expected '<type> <time>'", lineno);
  auto t = parse_time(tok[1]);
  if (!t) throw ParseError("time stamp '" + std::string(tok[1]) + "' is not an integer", lineno);
  if (*t < 0) throw ParseError("negative time stamp", lineno);
  return RawEvent{std::string(tok[0]), *t, lineno};
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  return out;
}

}  // namespace detail

inline EventSequence read_sequence(std::istream& in) {
  auto alphabet = std::make_shared<Alphabet>();
  std::vector<detail::RawEvent> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto names = detail::directive(line, "alphabet")) {
      for (auto n : detail::split_ws(*names)) alphabet->intern(n);
      continue;
    }
    auto body = detail::trim(line);
    if (body.empty() || body[0] == '#') continue;
    raw.push_back(detail::parse_event_line(body, lineno));
    alphabet->intern(raw.back().name);
  }
  return detail::assemble(raw, alphabet);
}

inline EventSequence read_sequence(const std::string& path) {
  auto in = detail::open_input(path);
  return read_sequence(in);
}

inline void write_sequence(std::ostream& out, const EventSequence& seq) {
  const auto& names = seq.alphabet().names();
  out << "#alphabet:";
  for (const auto& n : names) {
    detail::check_name(n);
    out << ' ' << n;
  }
  out << '\n';
  for (const Event& e : seq.events()) out << names[e.type] << ' ' << e.time << '\n';
}

inline void write_sequence(const std::string& path, const EventSequence& seq) {
  auto out = detail::open_output(path);
  write_sequence(out, seq);
  if (!out) throw IoError("failed writing " + path);
}

// ---------------------------------------------------------------------------
// Corpora

struct Corpus {
  std::vector<EventSequence> sequences;
  std::optional<std::vector<std::string>> labels;
  std::shared_ptr<const Alphabet> alphabet = std::make_shared<const Alphabet>();

  std::size_t size() const noexcept { return sequences.size(); }
};

inline Corpus read_corpus(std::istream& in) {
  struct Block {
    std::optional<std::string> label;
    std::vector<std::pair<std::string, std::size_t>> lines;
    std::size_t first_line = 0;
  };
  auto alphabet = std::make_shared<Alphabet>();
  std::vector<Block> blocks;
  Block cur;
  auto flush = [&] {
    if (cur.label || !cur.lines.empty()) blocks.push_back(std::move(cur));
    cur = Block{};
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::trim(line);
    if (body.empty()) {
      flush();
      continue;
    }
    if (auto names = detail::directive(body, "alphabet")) {
      for (auto n : detail::split_ws(*names)) alphabet->intern(n);
      continue;
    }
    if (auto label = detail::directive(body, "label")) {
      if (cur.label || !cur.lines.empty()) flush();
      if (label->empty()) throw ParseError("empty label", lineno);
      cur.label = std::string(*label);
      cur.first_line = lineno;
      continue;
    }
    if (body[0] == '#') continue;
    if (cur.lines.empty() && !cur.label) cur.first_line = lineno;
    cur.lines.emplace_back(std::string(body), lineno);
  }
  flush();

  std::vector<std::vector<detail::RawEvent>> raws;
  for (const Block& b : blocks) {
    const bool timed = std::all_of(b.lines.begin(), b.lines.end(), [](const auto& l) {
      auto tok = detail::split_ws(l.first);
      return tok.size() == 2 && detail::parse_time(tok[1]).has_value();
    });
    std::vector<detail::RawEvent> raw;
    if (timed) {
      for (const auto& [text, no] : b.lines) raw.push_back(detail::parse_event_line(text, no));
    } else {
      Time pos = 0;
      for (const auto& [text, no] : b.lines)
        for (auto tok : detail::split_ws(text)) raw.push_back({std::string(tok), ++pos, no});
    }
    for (const auto& r : raw) alphabet->intern(r.name);
    raws.push_back(std::move(raw));
  }

  Corpus corpus;
  corpus.alphabet = alphabet;
  const auto labeled = std::count_if(blocks.begin(), blocks.end(), [](const Block& b) { return b.label.has_value(); });
  if (labeled != 0 && static_cast<std::size_t>(labeled) != blocks.size()) {
    auto bad = std::find_if(blocks.begin(), blocks.end(), [](const Block& b) { return !b.label; });
    throw ParseError("label/sequence mismatch: block without #label in a labeled corpus", bad->first_line);
  }
  if (labeled) {
    corpus.labels.emplace();
    for (const auto& b : blocks) corpus.labels->push_back(*b.label);
  }
  for (const auto& raw : raws) corpus.sequences.push_back(detail::assemble(raw, alphabet));
  return corpus;
}

inline Corpus read_corpus(const std::string& path) {
  auto in = detail::open_input(path);
  return read_corpus(in);
}

inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  if (corpus.labels && corpus.labels->size() != corpus.sequences.size())
    throw InvalidArgument("label/sequence mismatch");
  out << "#alphabet:";
  for (const auto& n : corpus.alphabet->names()) {
    detail::check_name(n);
    out << ' ' << n;
  }
  out << '\n';
  for (std::size_t i = 0; i < corpus.sequences.size(); ++i) {
    out << '\n';
    if (corpus.labels) out << "#label: " << (*corpus.labels)[i] << '\n';
    for (const Event& e : corpus.sequences[i].events())
      out << corpus.alphabet->name(e.type) << ' ' << e.time << '\n';
  }
}

// All sequences of a corpus laid end to end. Block i is shifted so that it
// starts max_gap + 1 after block i-1 ends, which rules out any episode
// occurrence spanning two blocks.
struct Concatenation {
  EventSequence sequence;
  std::vector<Time> shifts;
  // [first, last] time of each non-empty block in the concatenated sequence.
  std::vector<std::pair<Time, Time>> spans;
};

inline Concatenation concatenate(const Corpus& corpus, Time max_gap) {
  if (max_gap < 1) throw InvalidArgument("max gap must be at least 1");
  Concatenation c;
  std::vector<Event> events;
  std::optional<Time> prev_end;
  for (const auto& seq : corpus.sequences) {
    Time shift = 0;
    if (!seq.empty()) {
      const Time first = seq[0].time;
      if (prev_end) shift = *prev_end + max_gap + 1 - first;
      for (const Event& e : seq.events()) events.push_back(Event{e.type, e.time + shift});
      prev_end = seq[seq.size() - 1].time + shift;
      c.spans.emplace_back(first + shift, *prev_end);
    }
    c.shifts.push_back(shift);
  }
  c.sequence = EventSequence(std::move(events), corpus.alphabet);
  return c;
}

// ---------------------------------------------------------------------------
// Feature export

struct FeatureMatrix {
  std::vector<std::string> columns;
  std::vector<std::vector<std::uint64_t>> rows;
  std::optional<std::vector<std::string>> labels;
};

inline std::uint64_t count_occurrences(const EventSequence& seq, const Episode& ep) {
  std::uint64_t n = 0;
  for (Time t : seq.times_of(ep.types.front()))
    if (verify_occurrence(seq, ep, t)) ++n;
  return n;
}

// One row per sequence: occurrence counts of the model's multi-node
// episodes, then per-type singleton counts. With drop_gaps, episodes that
// differ only in their gaps share one column counting all their
// occurrences; repeated episodes are counted once either way.
inline FeatureMatrix export_features(const Corpus& corpus, const SelectedModel& model, bool drop_gaps) {
  const Alphabet& a = *corpus.alphabet;
  struct Column {
    std::string name;
    std::vector<Episode> variants;
  };
  std::vector<Column> cols;
  std::map<std::vector<EventType>, std::size_t> by_types;
  std::map<Episode, std::size_t> by_episode;
  for (const auto& occ : model.episodes) {
    const Episode& ep = occ.episode;
    std::size_t idx;
    if (drop_gaps) {
      auto [it, fresh] = by_types.try_emplace(ep.types, cols.size());
      idx = it->second;
      if (fresh) {
        std::string name;
        for (std::size_t j = 0; j < ep.size(); ++j) name += (j ? "->" : "") + a.name(ep.types[j]);
        cols.push_back({name, {}});
      }
    } else {
      auto [it, fresh] = by_episode.try_emplace(ep, cols.size());
      idx = it->second;
      if (fresh) {
        std::string name;
        for (std::size_t j = 0; j < ep.size(); ++j)
          name += (j ? "-" + std::to_string(ep.gaps[j - 1]) + "->" : std::string()) + a.name(ep.types[j]);
        cols.push_back({name, {}});
      }
    }
    auto& v = cols[idx].variants;
    if (std::find(v.begin(), v.end(), ep) == v.end()) v.push_back(ep);
  }

  FeatureMatrix m;
  m.labels = corpus.labels;
  for (const auto& c : cols) m.columns.push_back(c.name);
  for (const auto& n : a.names()) m.columns.push_back(n);
  for (const auto& seq : corpus.sequences) {
    std::vector<std::uint64_t> row;
    for (const auto& c : cols) {
      std::uint64_t n = 0;
      for (const auto& ep : c.variants) n += count_occurrences(seq, ep);
      row.push_back(n);
    }
    for (EventType t = 0; t < a.size(); ++t) row.push_back(seq.times_of(t).size());
    m.rows.push_back(std::move(row));
  }
  return m;
}

inline void write_features(std::ostream& out, const FeatureMatrix& m, char delimiter = ',') {
  bool first = true;
  auto cell = [&](const auto& v) {
    if (!first) out << delimiter;
    out << v;
    first = false;
  };
  if (m.labels) cell("label");
  for (const auto& c : m.columns) cell(c);
  out << '\n';
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    first = true;
    if (m.labels) cell((*m.labels)[r]);
    for (auto v : m.rows[r]) cell(v);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Model files

struct ModelEntry {
  std::vector<std::string> types;
  std::vector<Time> gaps;
  std::optional<std::vector<Time>> starts;
};

inline std::vector<ModelEntry> read_model(std::istream& in) {
  std::vector<ModelEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::trim(line);
    if (body.empty() || body[0] == '#') continue;
    ModelEntry e;
    auto all = detail::split_ws(body);
    auto colon = std::find(all.begin(), all.end(), std::string_view(":"));
    if (colon != all.end()) {
      e.starts.emplace();
      for (auto it = colon + 1; it != all.end(); ++it) {
        auto t = detail::parse_time(*it);
        if (!t || *t < 0) throw ParseError("bad start time '" + std::string(*it) + "'", lineno);
        e.starts->push_back(*t);
      }
    }
    const std::vector<std::string_view> tok(all.begin(), colon);
    if (tok.size() % 2 == 0) throw ParseError("expected '<type> <gap> <type> ...'", lineno);
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (i % 2 == 0) {
        e.types.emplace_back(tok[i]);
      } else {
        auto g = detail::parse_time(tok[i]);
        if (!g || *g < 1) throw ParseError("bad gap '" + std::string(tok[i]) + "'", lineno);
        e.gaps.push_back(*g);
      }
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

inline std::vector<ModelEntry> read_model(const std::string& path) {
  auto in = detail::open_input(path);
  return read_model(in);
}

inline void write_model(std::ostream& out, const SelectedModel& model) {
  out << "# episode (type gap type ...) : occurrence starts\n";
  for (const auto& occ : model.episodes) {
    const Episode& ep = occ.episode;
    for (std::size_t j = 0; j < ep.size(); ++j) {
      if (j) out << ' ' << ep.gaps[j - 1] << ' ';
      out << model.alphabet->name(ep.types[j]);
    }
    out << " :";
    for (const auto& w : occ.windows) out << ' ' << w.start;
    out << '\n';
  }
}

inline Episode resolve_episode(const ModelEntry& e, const Alphabet& alphabet) {
  Episode ep;
  for (const auto& n : e.types) {
    auto id = alphabet.find(n);
    if (!id) throw InvalidArgument("model symbol '" + n + "' is not in the sequence alphabet");
    ep.types.push_back(*id);
  }
  ep.gaps = e.gaps;
  ep.validate();
  return ep;
}

inline std::vector<DictionaryEntry> resolve_model(const std::vector<ModelEntry>& entries,
                                                  const Alphabet& alphabet) {
  std::vector<DictionaryEntry> out;
  for (const auto& e : entries) out.push_back({resolve_episode(e, alphabet), e.starts});
  return out;
}

}  // namespace cse
