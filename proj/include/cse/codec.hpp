#pragma once

// Dictionary-table encoding of an event sequence: one row per episode
// (size, types, gaps, occurrence count, start times), length accounting in
// integer units and in bits, and lossless decoding.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cse/bitstream.hpp"
#include "cse/event.hpp"
#include "cse/selector.hpp"

namespace cse {

struct CodeRow {
  std::size_t size = 0;
  Episode episode;
  std::size_t occ_count = 0;
  std::vector<Time> starts;

  friend bool operator==(const CodeRow&, const CodeRow&) = default;
};

struct CodeTable {
  std::vector<CodeRow> rows;
  std::shared_ptr<const Alphabet> alphabet = std::make_shared<const Alphabet>();

  std::size_t alphabet_size() const noexcept { return alphabet->size(); }

  friend bool operator==(const CodeTable& a, const CodeTable& b) {
    return a.rows == b.rows && *a.alphabet == *b.alphabet;
  }
};

inline CodeRow make_row(Episode episode, std::vector<Time> starts) {
  std::sort(starts.begin(), starts.end());
  CodeRow row;
  row.size = episode.size();
  row.episode = std::move(episode);
  row.occ_count = starts.size();
  row.starts = std::move(starts);
  return row;
}

// Multi-node episodes in selection order, then one row per singleton type.
inline CodeTable build_table(const SelectedModel& model) {
  CodeTable table;
  table.alphabet = model.alphabet;
  for (const auto& e : model.episodes) table.rows.push_back(make_row(e.episode, e.starts()));
  for (const auto& s : model.singletons) table.rows.push_back(make_row(Episode::single(s.type), s.times));
  return table;
}

// Singletons-only table of seq.
inline CodeTable trivial_table(const EventSequence& seq) {
  SelectedModel m;
  m.alphabet = seq.alphabet_ptr();
  m.singletons = singleton_rows(seq);
  return build_table(m);
}

struct EncodingStats {
  std::int64_t model_len = 0;  // L(H)
  std::int64_t data_len = 0;   // L(D|H)
  std::int64_t total = 0;      // L(H, D)
  std::int64_t trivial_len = 0;
  double ratio = 0.0;
  std::uint64_t bit_total = 0;
  std::uint64_t bit_trivial = 0;
  double bit_ratio = 0.0;
};

// Unit-level lengths: each row costs 2k for its dictionary entry and
// f + 1 for its occurrence list.
inline EncodingStats unit_length(const CodeTable& table) {
  EncodingStats s;
  for (const auto& r : table.rows) {
    s.model_len += 2 * static_cast<std::int64_t>(r.size);
    s.data_len += static_cast<std::int64_t>(r.occ_count) + 1;
  }
  s.total = s.model_len + s.data_len;
  return s;
}

// 3M + |D| with M counting only types that occur.
inline std::int64_t trivial_length(const EventSequence& seq) {
  return 3 * static_cast<std::int64_t>(seq.distinct_types()) + static_cast<std::int64_t>(seq.size());
}

// Start lists in the bit format are either delta coded (first absolute,
// then successive differences) or written raw.
enum class StartCoding : std::uint8_t { kDelta = 0, kRaw = 1 };

namespace detail {

inline std::uint64_t elias_value(Time v) {
  if (v < 0) throw InvalidArgument("negative value in bit stream");
  return static_cast<std::uint64_t>(v) + 1;
}

// Visits the bit-level integer stream of a table: fn(value, fixed_width)
// where fixed_width == 0 marks an Elias-coded value (already offset by +1).
template <typename Fn>
void for_each_bit_field(const CodeTable& table, StartCoding coding, Fn&& fn) {
  const std::uint64_t m = table.alphabet_size();
  const unsigned width = fixed_width(m);
  fn(m + 1, 0u);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const CodeRow& row = table.rows[r];
    fn(static_cast<std::uint64_t>(row.size) + 1, 0u);
    for (EventType t : row.episode.types) fn(t, width);
    for (Time g : row.episode.gaps) fn(elias_value(g), 0u);
    fn(static_cast<std::uint64_t>(row.occ_count) + 1, 0u);
    Time prev = 0;
    for (std::size_t i = 0; i < row.starts.size(); ++i) {
      const Time s = row.starts[i];
      if (coding == StartCoding::kDelta) {
        if (i > 0 && s <= prev) throw DecodeError("start times not strictly increasing", r);
        fn(elias_value(i == 0 ? s : s - prev), 0u);
      } else {
        fn(elias_value(s), 0u);
      }
      prev = s;
    }
  }
}

}  // namespace detail

// Throws DecodeError naming the first inconsistent row.
inline void validate_table(const CodeTable& table) {
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const CodeRow& row = table.rows[r];
    if (row.size == 0) throw DecodeError("episode size is zero", r);
    if (row.size != row.episode.types.size())
      throw DecodeError("size " + std::to_string(row.size) + " but " +
                            std::to_string(row.episode.types.size()) + " event types",
                        r);
    if (row.occ_count != row.starts.size())
      throw DecodeError("occurrence count " + std::to_string(row.occ_count) + " but " +
                            std::to_string(row.starts.size()) + " start times",
                        r);
    try {
      row.episode.validate();
    } catch (const InvalidArgument& e) {
      throw DecodeError(e.what(), r);
    }
    for (EventType t : row.episode.types)
      if (t >= table.alphabet_size())
        throw DecodeError("event type id " + std::to_string(t) + " outside alphabet", r);
    for (Time s : row.starts)
      if (s < 0) throw DecodeError("negative start time", r);
  }
}

// Rolls out every occurrence of every row, sorts canonically and drops the
// duplicates that overlapping occurrences produce.
inline EventSequence decode(const CodeTable& table) {
  validate_table(table);
  std::vector<Event> events;
  for (const auto& row : table.rows)
    for (Time s : row.starts) {
      auto occ = roll_out(row.episode, s);
      events.insert(events.end(), occ.begin(), occ.end());
    }
  return EventSequence::from_unordered(std::move(events), table.alphabet, true);
}

// Exact payload size of bit_encode, computed from code lengths alone.
inline std::uint64_t bit_length(const CodeTable& table, StartCoding coding = StartCoding::kDelta) {
  std::uint64_t bits = 0;
  detail::for_each_bit_field(table, coding, [&](std::uint64_t v, unsigned width) {
    bits += width ? width : elias_len(v);
  });
  return bits;
}

struct BitPayload {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bits = 0;
};

// Stream: M, then per row: size, k fixed-width type codes, k-1 gaps,
// occurrence count, starts. Every Elias-coded quantity is written as
// value + 1 so zero times stay representable.
inline BitPayload bit_encode(const CodeTable& table, StartCoding coding = StartCoding::kDelta) {
  validate_table(table);
  BitWriter w;
  detail::for_each_bit_field(table, coding, [&](std::uint64_t v, unsigned width) {
    if (width)
      w.put_bits(v, width);
    else
      w.put_elias(v);
  });
  return BitPayload{w.bytes(), w.bit_count()};
}

// Inverse of bit_encode. The alphabet's size must match the M in the stream.
inline CodeTable bit_decode(const BitPayload& payload, std::shared_ptr<const Alphabet> alphabet,
                            StartCoding coding = StartCoding::kDelta) {
  BitReader r(payload.bytes, payload.bits);
  auto small = [](std::uint64_t v, std::uint64_t limit, const char* what) {
    if (v == 0 || v - 1 > limit) throw CorruptStream(std::string(what) + " out of range");
    return v - 1;
  };
  constexpr auto kTimeMax = static_cast<std::uint64_t>(INT64_MAX / 2);

  const std::uint64_t m = small(r.get_elias(), UINT32_MAX, "alphabet size");
  if (!alphabet || alphabet->size() != m)
    throw CorruptStream("alphabet size " + std::to_string(m) + " does not match string table");
  const unsigned width = fixed_width(m);

  CodeTable table;
  table.alphabet = std::move(alphabet);
  while (!r.at_end()) {
    CodeRow row;
    row.size = small(r.get_elias(), m, "episode size");
    if (row.size == 0) throw CorruptStream("episode size is zero");
    for (std::size_t j = 0; j < row.size; ++j) {
      const std::uint64_t t = r.get_bits(width);
      if (t >= m) throw CorruptStream("event type code out of range");
      row.episode.types.push_back(static_cast<EventType>(t));
    }
    for (std::size_t j = 1; j < row.size; ++j)
      row.episode.gaps.push_back(static_cast<Time>(small(r.get_elias(), kTimeMax, "gap")));
    row.occ_count = small(r.get_elias(), payload.bits, "occurrence count");
    Time prev = 0;
    for (std::size_t i = 0; i < row.occ_count; ++i) {
      const auto v = static_cast<Time>(small(r.get_elias(), kTimeMax, "start time"));
      const Time s = (coding == StartCoding::kDelta && i > 0) ? prev + v : v;
      if (s > static_cast<Time>(kTimeMax)) throw CorruptStream("start time overflow");
      row.starts.push_back(s);
      prev = s;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Unit and bit lengths of `table` against the trivial encoding of `original`.
inline EncodingStats encoding_stats(const CodeTable& table, const EventSequence& original,
                                    StartCoding coding = StartCoding::kDelta) {
  EncodingStats s = unit_length(table);
  s.trivial_len = trivial_length(original);
  s.ratio = s.total > 0 ? static_cast<double>(s.trivial_len) / static_cast<double>(s.total) : 1.0;
  s.bit_total = bit_length(table, coding);
  s.bit_trivial = bit_length(trivial_table(original), coding);
  s.bit_ratio = s.bit_total > 0 ? static_cast<double>(s.bit_trivial) / static_cast<double>(s.bit_total) : 1.0;
  return s;
}

}  // namespace cse
