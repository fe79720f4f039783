#pragma once

#include <array>
#include <cstdint>

namespace smalldev::rng {

/// Philox4x32-10 counter-based block function (Salmon et al., Random123).
/// A keyed bijection on 128-bit counters; distinct counters give independent
/// looking outputs, so streams can be addressed directly without seeding state.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// Random stream addressed by (seed, stream_index). The counter is laid out as
/// {block_lo, block_hi, index_lo, index_hi} under key = seed, so the outcome of
/// stream i never depends on which thread draws it or in what order.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on (0, 1], 53-bit resolution.
  double next_uniform() noexcept;
  /// Standard normal (Box-Muller; the second variate of each pair is cached).
  double next_normal() noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  std::uint64_t index_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace smalldev::rng
