#pragma once

// On-disk framing of encoded tables.
//
//   .cse   "CSEUNIT1" | u64 n | n x u64 (row integers) | string table
//   .cseb  "CSEBITS1" | u8 start-coding | u64 payload bits | payload bytes
//          | string table
//
// All integers little-endian. The string table is u64 count followed by
// (u64 length, bytes) per alphabet symbol, in id order. In the unit format
// the integer count n equals the unit-level total length of the table.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "cse/codec.hpp"

namespace cse {

inline constexpr std::string_view kUnitMagic = "CSEUNIT1";
inline constexpr std::string_view kBitMagic = "CSEBITS1";

enum class EncodedFormat { kUnit, kBit };

struct EncodedFile {
  EncodedFormat format = EncodedFormat::kUnit;
  StartCoding coding = StartCoding::kDelta;
  CodeTable table;
  std::uint64_t payload_bits = 0;  // kBit only
};

namespace detail {

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

class ByteCursor {
 public:
  explicit ByteCursor(std::string_view bytes) : bytes_(bytes) {}

  std::string_view take(std::size_t n) {
    if (n > bytes_.size() - pos_) throw CorruptStream("unexpected end of encoded file");
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint64_t u64() {
    auto s = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[static_cast<std::size_t>(i)]);
    return v;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

inline void put_strings(std::string& out, const Alphabet& a) {
  put_u64(out, a.size());
  for (const auto& n : a.names()) {
    put_u64(out, n.size());
    out += n;
  }
}

inline std::shared_ptr<const Alphabet> get_strings(ByteCursor& in) {
  const std::uint64_t count = in.u64();
  if (count > in.remaining() / 8) throw CorruptStream("string table count out of range");
  auto a = std::make_shared<Alphabet>();
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t len = in.u64();
    if (len > in.remaining()) throw CorruptStream("string length out of range");
    const auto name = in.take(static_cast<std::size_t>(len));
    if (name.empty() || a->find(name)) throw CorruptStream("invalid or repeated alphabet symbol");
    a->intern(name);
  }
  if (in.remaining() != 0) throw CorruptStream("trailing bytes after string table");
  return a;
}

}  // namespace detail

// Row integers strung together: size, types, gaps, count, starts.
inline std::vector<std::uint64_t> unit_stream(const CodeTable& table) {
  validate_table(table);
  std::vector<std::uint64_t> ints;
  for (const auto& r : table.rows) {
    ints.push_back(r.size);
    for (auto t : r.episode.types) ints.push_back(t);
    for (auto g : r.episode.gaps) ints.push_back(static_cast<std::uint64_t>(g));
    ints.push_back(r.occ_count);
    for (auto s : r.starts) ints.push_back(static_cast<std::uint64_t>(s));
  }
  return ints;
}

inline CodeTable parse_unit_stream(std::span<const std::uint64_t> ints,
                                   std::shared_ptr<const Alphabet> alphabet) {
  CodeTable table;
  table.alphabet = std::move(alphabet);
  const std::uint64_t m = table.alphabet_size();
  std::size_t i = 0;
  auto need = [&](std::uint64_t n) {
    if (n > ints.size() - i) throw CorruptStream("row runs past end of integer stream");
  };
  auto time_value = [](std::uint64_t v, const char* what) {
    if (v > static_cast<std::uint64_t>(INT64_MAX)) throw CorruptStream(std::string(what) + " out of range");
    return static_cast<Time>(v);
  };
  while (i < ints.size()) {
    CodeRow row;
    row.size = ints[i++];
    if (row.size == 0 || row.size > m) throw CorruptStream("episode size out of range");
    need(2 * row.size);  // types, gaps and the count
    for (std::size_t j = 0; j < row.size; ++j) {
      if (ints[i] >= m) throw CorruptStream("event type id out of range");
      row.episode.types.push_back(static_cast<EventType>(ints[i++]));
    }
    for (std::size_t j = 1; j < row.size; ++j) row.episode.gaps.push_back(time_value(ints[i++], "gap"));
    row.occ_count = ints[i++];
    need(row.occ_count);
    for (std::size_t j = 0; j < row.occ_count; ++j) row.starts.push_back(time_value(ints[i++], "start"));
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline std::string serialize_unit(const CodeTable& table) {
  const auto ints = unit_stream(table);
  std::string out(kUnitMagic);
  detail::put_u64(out, ints.size());
  for (auto v : ints) detail::put_u64(out, v);
  detail::put_strings(out, *table.alphabet);
  return out;
}

inline std::string serialize_bits(const CodeTable& table, StartCoding coding = StartCoding::kDelta) {
  const BitPayload p = bit_encode(table, coding);
  std::string out(kBitMagic);
  out.push_back(static_cast<char>(coding));
  detail::put_u64(out, p.bits);
  out.append(p.bytes.begin(), p.bytes.end());
  detail::put_strings(out, *table.alphabet);
  return out;
}

// Parses either format, chosen by magic. Throws CorruptStream on framing or
// bounds violations.
inline EncodedFile parse_encoded(std::string_view bytes) {
  detail::ByteCursor in(bytes);
  const auto magic = in.take(8);
  EncodedFile f;
  if (magic == kUnitMagic) {
    f.format = EncodedFormat::kUnit;
    const std::uint64_t n = in.u64();
    if (n > in.remaining() / 8) throw CorruptStream("integer count exceeds file size");
    std::vector<std::uint64_t> ints(static_cast<std::size_t>(n));
    for (auto& v : ints) v = in.u64();
    auto alphabet = detail::get_strings(in);
    f.table = parse_unit_stream(ints, std::move(alphabet));
  } else if (magic == kBitMagic) {
    f.format = EncodedFormat::kBit;
    const std::uint8_t coding = in.u8();
    if (coding > 1) throw CorruptStream("unknown start coding");
    f.coding = static_cast<StartCoding>(coding);
    f.payload_bits = in.u64();
    if (f.payload_bits / 8 > in.remaining()) throw CorruptStream("bit payload exceeds file size");
    const auto raw = in.take(static_cast<std::size_t>((f.payload_bits + 7) / 8));
    BitPayload p{{raw.begin(), raw.end()}, f.payload_bits};
    auto alphabet = detail::get_strings(in);
    f.table = bit_decode(p, std::move(alphabet), f.coding);
  } else {
    throw CorruptStream("unrecognized file magic");
  }
  validate_table(f.table);
  return f;
}

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace cse
