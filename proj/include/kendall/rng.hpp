#pragma once

#include <cstdint>
#include <random>

namespace kendall {

/// SplitMix64 finalizer; used to decorrelate seeds before they reach the engine.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream identified by (master seed, stream id).
///
/// Every (seed, stream_id) pair maps to its own std::mt19937_64 state through a
/// SplitMix64-mixed seed_seq, so a replication's stream does not depend on how
/// many other streams were consumed before it, or on which thread runs it.
class SeededGenerator {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit SeededGenerator(std::uint64_t seed, std::uint64_t stream_id = 0);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1): (k + 1/2) / 2^53 for a 53-bit k.
  double uniform_open();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Child master seed for a named sub-experiment (table row, criterion, ...).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

}  // namespace kendall
