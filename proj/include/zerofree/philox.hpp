#pragma once
// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Each random
// stream is addressed by (seed, sample, node, purpose); a stream never shares
// counters with another, so results do not depend on scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace zerofree {

/// One Philox4x32-10 block: 4 output words for a 128-bit counter and 64-bit key.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(m0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(m1) * ctr[2];
        const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

/// UniformRandomBitGenerator over the blocks of one (seed, sample, node, purpose) stream.
class PhiloxStream {
public:
    using result_type = std::uint32_t;

    /// `node` may use up to 42 bits and `purpose` 4 bits.
    PhiloxStream(std::uint64_t seed, std::uint32_t sample, std::uint64_t node, std::uint32_t purpose)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
          base_{sample, std::uint32_t(node), std::uint32_t((node >> 32) & 0x3FFu) | ((purpose & 0xFu) << 10)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (pos_ == 4) {
            buf_ = philox4x32_10({base_[0], base_[1], base_[2] | (std::uint32_t(block_ >> 32) << 14),
                                  std::uint32_t(block_)},
                                 key_);
            ++block_;
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    /// Uniform double in (0, 1] with 53 random bits.
    double uniform_open0() {
        const std::uint64_t hi = (*this)() >> 5, lo = (*this)() >> 6;
        return (double(hi * 67108864ULL + lo) + 1.0) / 9007199254740992.0;
    }

    /// Standard exponential variate.
    double exponential() { return -std::log(uniform_open0()); }

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 3> base_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace zerofree
