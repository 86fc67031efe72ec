// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace uvnlos::mcpt {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter c, Key k) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
  }
};

/// Uniform stream for one photon: key = seed, counter = (draw block, 0, photon id).
class PhotonStream {
 public:
  PhotonStream(std::uint64_t seed, std::uint64_t photon)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        id_lo_(static_cast<std::uint32_t>(photon)),
        id_hi_(static_cast<std::uint32_t>(photon >> 32)) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    if (slot_ == 2) refill();
    const std::uint64_t a = buf_[2 * slot_] >> 5;
    const std::uint64_t b = buf_[2 * slot_ + 1] >> 6;
    ++slot_;
    return static_cast<double>(a * 67108864u + b) * (1.0 / 9007199254740992.0);
  }

  std::uint32_t draws() const { return block_; }

 private:
  void refill() {
    buf_ = Philox4x32::generate({block_, 0u, id_lo_, id_hi_}, key_);
    ++block_;
    slot_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t id_lo_;
  std::uint32_t id_hi_;
  std::uint32_t block_{0};
  int slot_{2};
  Philox4x32::Counter buf_{};
};

}  // namespace uvnlos::mcpt
