#pragma once

// Counter-based random streams. Every draw is a pure function of
// (key, counter), so any partition of the work across threads reproduces the
// same numbers.

#include <array>
#include <cstdint>

namespace imdd::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for an independent sub-stream, e.g. one optimizer start.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 (Salmon et al., SC'11).
Counter philox4x32(Counter ctr, Key key) noexcept;

/// Uniform double in [0, 1) from 53 random bits.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

/// Uniform double in (0, 1], safe for log().
inline double to_unit_open_low(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
  return static_cast<double>(bits + 1) * 0x1.0p-53;
}

/// Two independent standard normals from one Philox block (Box-Muller).
std::array<double, 2> box_muller(const Counter& block) noexcept;

/// Sequential generator over a Philox stream; used where a draw count is
/// data dependent (optimizer initialization).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  double uniform() noexcept {
    const auto block = next_block();
    return to_unit(block[0], block[1]);
  }

 private:
  Counter next_block() noexcept {
    const Counter ctr{static_cast<std::uint32_t>(count_), static_cast<std::uint32_t>(count_ >> 32), 0u, 0u};
    ++count_;
    return philox4x32(ctr, key_);
  }

  Key key_;
  std::uint64_t count_ = 0;
};

}  // namespace imdd::rng
