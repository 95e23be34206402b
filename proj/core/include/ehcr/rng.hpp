#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Counter-based random number generation (Philox 4x32-10, Salmon et al.).
// Every draw is a pure function of (seed, stream, index), so any position
// of any stream can be produced directly and in parallel; repeated runs
// are bit-identical regardless of thread count or evaluation order.

namespace ehcr::rng {

namespace detail {
inline constexpr std::uint32_t kMult0 = 0xD2511F53u;
inline constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
}  // namespace detail

/// One Philox 4x32-10 block: 128-bit counter, 64-bit key, 128-bit output.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(detail::kMult0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(detail::kMult1) * ctr[2];
    ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
           std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
    key[0] += detail::kWeyl0;
    key[1] += detail::kWeyl1;
  }
  return ctr;
}

/// 64-bit word at position `index` of stream `stream` under `seed`.
/// Layout: key = seed, counter = (index_lo, index_hi, stream_lo, stream_hi);
/// the first two output words form the result.
inline std::uint64_t word_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto out = philox4x32({std::uint32_t(index), std::uint32_t(index >> 32),
                               std::uint32_t(stream), std::uint32_t(stream >> 32)},
                              {std::uint32_t(seed), std::uint32_t(seed >> 32)});
  return (std::uint64_t(out[0]) << 32) | out[1];
}

/// Uniform double in [0, 1) from the top 53 bits of a word.
inline double to_unit(std::uint64_t word) {
  return double(word >> 11) * 0x1.0p-53;
}

/// Exponential draw with the given mean, by inverse CDF.
inline double to_exponential(std::uint64_t word, double mean) {
  return -mean * std::log1p(-to_unit(word));
}

/// SplitMix64 finalizer, used to mix ids into derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace ehcr::rng
