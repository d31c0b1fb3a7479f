#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace jdg::rng {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw; SC'11).
// Stateless: every 128-bit counter / 64-bit key pair maps to an independent
// 128-bit block, so draws are pure functions of (seed, path, purpose, index)
// and parallel reduction order cannot change results.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
      ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
             std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
    }
    return ctr;
  }
};

enum class Purpose : std::uint32_t { diffusion = 0, jumps = 1, marks = 2 };

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  Purpose purpose = Purpose::diffusion;
};

double inverse_normal_cdf(double p);

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * 0.3989422804014327;
}

// Random-access stream of i.i.d. draws keyed by (seed, path, purpose).
class Stream {
 public:
  explicit Stream(StreamKey k)
      : key_{std::uint32_t(k.seed), std::uint32_t(k.seed >> 32)},
        hi_{std::uint32_t(k.path),
            (std::uint32_t(k.path >> 32) & 0x3FFFFFFFu) |
                (std::uint32_t(k.purpose) << 30)} {}

  // Uniform on (0,1); never returns an endpoint.
  double uniform(std::uint64_t i) const {
    const auto b = Philox4x32::block(
        {std::uint32_t(i), std::uint32_t(i >> 32), hi_[0], hi_[1]}, key_);
    const std::uint64_t u = (std::uint64_t(b[0]) << 32) | b[1];
    return (double(u >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(std::uint64_t i) const { return inverse_normal_cdf(uniform(i)); }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> hi_;
};

}  // namespace jdg::rng
