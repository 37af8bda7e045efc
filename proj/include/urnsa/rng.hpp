#pragma once

// Per-path random streams. Path i of an ensemble draws from xoshiro256++
// seeded by splitmix64 applied to a mix of (master_seed, i), so every path is
// reproducible on its own and independent of how paths are scheduled.

#include <array>
#include <bit>
#include <cstdint>

namespace urnsa {

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t s = x;
  return splitmix64_next(s);
}

class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  constexpr Xoshiro256pp() noexcept : Xoshiro256pp(0, 0) {}

  constexpr Xoshiro256pp(std::uint64_t master_seed, std::uint64_t stream) noexcept {
    std::uint64_t sm = mix64(master_seed) ^ mix64(stream ^ 0xD1B54A32D192ED03ULL);
    for (auto& w : s_) w = splitmix64_next(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  constexpr const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }
  constexpr void set_state(const std::array<std::uint64_t, 4>& s) noexcept { s_ = s; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// 52 random mantissa bits mapped to [0,1) through the [1,2) exponent trick;
/// vector kernels use the same bit pattern so every lane matches this exactly.
inline double uniform_from_bits(std::uint64_t bits) noexcept {
  return std::bit_cast<double>((bits >> 12) | 0x3FF0000000000000ULL) - 1.0;
}

/// Returns +magnitude when the top bit is clear and -magnitude when set.
inline double signed_by_top_bit(double magnitude, std::uint64_t bits) noexcept {
  return std::bit_cast<double>(std::bit_cast<std::uint64_t>(magnitude) ^ (bits & 0x8000000000000000ULL));
}

}  // namespace urnsa
