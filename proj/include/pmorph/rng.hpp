#pragma once

// Counter-based random numbers (Philox4x32, 10 rounds). Counter mode gives
// every (seed, substream, draw index) triple an independent value, so Monte
// Carlo runs are reproducible per seed and independent of worker scheduling:
// each sample derives its own substream from its index instead of sharing
// sequential generator state.

#include <array>
#include <cstdint>

namespace pmorph {

// One Philox4x32-10 block: 128-bit counter, 64-bit key, 128 output bits.
std::array<std::uint32_t, 4> philox4x32_block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Independent child stream. Chaining substream() calls with distinct tags
  // (experiment, stratum, sample index, point index, ...) never collides with
  // the parent's own draw sequence.
  Rng substream(std::uint64_t a, std::uint64_t b = 0) const;

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform();
  double uniform(double lo, double hi);

  // Unbiased integer in [0, n); n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  // Standard normal via Box-Muller (demand-paired).
  double normal();

 private:
  Rng() = default;

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 2> stream_{};
  std::uint64_t draw_ = 0;

  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;

  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace pmorph
