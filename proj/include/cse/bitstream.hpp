#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cse/error.hpp"

namespace cse {

// Elias gamma code length of n >= 1: 2*floor(log2 n) + 1.
inline std::uint64_t elias_len(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("Elias code undefined for 0");
  return 2 * static_cast<std::uint64_t>(std::bit_width(n) - 1) + 1;
}

// Bits needed for a fixed-width event-type code over an alphabet of m
// symbols: floor(log2 m) + 1.
inline unsigned fixed_width(std::uint64_t m) noexcept {
  return m == 0 ? 1u : static_cast<unsigned>(std::bit_width(m));
}

// MSB-first bit sink.
class BitWriter {
 public:
  void put_bit(bool b) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if (b) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
    ++bits_;
  }

  void put_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) put_bit((value >> i) & 1u);
  }

  void put_elias(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("Elias code undefined for 0");
    const auto len = static_cast<unsigned>(std::bit_width(n));
    for (unsigned i = 1; i < len; ++i) put_bit(false);
    put_bits(n, len);
  }

  std::uint64_t bit_count() const noexcept { return bits_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bits_ = 0;
};

// Reads back what BitWriter wrote; every read is bounds-checked against the
// declared payload length.
class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_count)
      : bytes_(bytes), limit_(bit_count) {
    if ((bit_count + 7) / 8 > bytes.size())
      throw CorruptStream("bit payload shorter than its declared length");
  }

  bool get_bit() {
    if (pos_ >= limit_) throw CorruptStream("read past end of bit payload");
    const bool b = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return b;
  }

  std::uint64_t get_bits(unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(get_bit());
    return v;
  }

  std::uint64_t get_elias() {
    unsigned zeros = 0;
    while (!get_bit()) {
      if (++zeros > 63) throw CorruptStream("Elias prefix too long");
    }
    return (std::uint64_t{1} << zeros) | get_bits(zeros);
  }

  bool at_end() const noexcept { return pos_ >= limit_; }
  std::uint64_t position() const noexcept { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t limit_;
  std::uint64_t pos_ = 0;
};

}  // namespace cse
