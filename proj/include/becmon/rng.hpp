// rng.hpp — counter-based random number generator (Philox4x32-10)
//
// Counter-based so that every (seed, stream) pair is an independent,
// splittable sequence: trajectory i of an ensemble draws from stream i
// without any jump-ahead bookkeeping, and replaying a seed reproduces
// the noise bit-for-bit on any platform.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace becmon {

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::array<std::uint32_t, 2>& key) {
    constexpr std::uint64_t kMul0 = 0xD2511F53;
    constexpr std::uint64_t kMul1 = 0xCD9E8D57;
    const std::uint64_t p0 = kMul0 * ctr[0];
    const std::uint64_t p1 = kMul1 * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += 0x9E3779B9;
    key[1] += 0xBB67AE85;
}

} // namespace detail

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          block_{0, 0,
                 static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return out_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // uniform on [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box–Muller; one spare value cached per pair
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Wiener increment over a step of length dt
    double wiener_increment(double dt) { return std::sqrt(dt) * normal(); }

  private:
    void refill() {
        auto ctr = block_;
        auto key = key_;
        for (int i = 0; i < 10; ++i) detail::philox_round(ctr, key);
        out_ = ctr;
        pos_ = 0;
        if (++block_[0] == 0) ++block_[1]; // 64-bit counter; stream words untouched
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> block_;
    std::array<std::uint32_t, 4> out_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Fixed stream ids so different uses of the same seed never collide.
inline constexpr std::uint64_t kNoiseStream = 0;  // measurement noise dW
inline constexpr std::uint64_t kPhaseStream = 1;  // random initial-estimate phases

} // namespace becmon
