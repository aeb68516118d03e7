#include "kendall/rng.hpp"

#include <array>

namespace kendall {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream_id + 0x632BE59BD9B4E019ULL));
  const std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

SeededGenerator::SeededGenerator(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double SeededGenerator::uniform_open() {
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master_seed) + 0xD1B54A32D192ED03ULL * (index + 1));
}

}  // namespace kendall
