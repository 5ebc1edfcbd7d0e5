#pragma once

#include <cstddef>
#include <cstdint>

namespace cse {

// Encoding gain of an N-node episode with f occurrences over coding the same
// f*N events as singletons: f*N - (2N + f + 1). Positive means useful.
constexpr std::int64_t score(std::size_t episode_len, std::size_t frequency) noexcept {
  const auto n = static_cast<std::int64_t>(episode_len);
  const auto f = static_cast<std::int64_t>(frequency);
  return f * n - (2 * n + f + 1);
}

}  // namespace cse
