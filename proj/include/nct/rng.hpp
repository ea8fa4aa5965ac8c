#pragma once

#include <cstdint>

namespace nct {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: the k-th draw of history h under seed depends on
/// (seed, h, k) only, never on which thread runs the history.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t history)
      : key_(splitmix64(splitmix64(seed) ^ splitmix64(history + 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t next_u64() { return splitmix64(key_ + 0x632BE59BD9B4E019ULL * ++counter_); }
  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace nct
