#pragma once

#include <cstdint>

namespace subpix {

// Stateless counter-based generator built on the splitmix64 finalizer.
// rng_at(key, k) equals the k-th output of a splitmix64 stream seeded with
// key, so any position can be evaluated independently: parallel workers need
// no shared generator state and results cannot depend on scheduling.

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rng_at(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + (counter + 1) * kGolden);
}

// Derives a child stream key. Children of distinct indices, and the parent
// stream itself, behave as unrelated streams.
constexpr std::uint64_t split_key(std::uint64_t key, std::uint64_t index) {
  return mix64((key ^ 0xA5A5A5A5A5A5A5A5ull) + (index + 1) * kGolden);
}

// Uniform double in [0, 1), using the top 53 bits.
constexpr double uniform01(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>(rng_at(key, counter) >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) without modulo bias worth caring about at
// image scales (bound <= 2^32 here, bias < 2^-32).
constexpr std::uint64_t uniform_below(std::uint64_t key, std::uint64_t counter,
                                      std::uint64_t bound) {
  return static_cast<std::uint64_t>(uniform01(key, counter) *
                                    static_cast<double>(bound));
}

}  // namespace subpix
