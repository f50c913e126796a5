#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace tempscale {

// Philox 4x32-10 (Salmon et al., SC 2011). Counter-based: the output block is
// a pure function of (key, counter), so any sample can be generated without
// drawing its predecessors.
namespace philox {

inline constexpr uint32_t kW32A = 0x9E3779B9;
inline constexpr uint32_t kW32B = 0xBB67AE85;
inline constexpr uint32_t kM4x32A = 0xD2511F53;
inline constexpr uint32_t kM4x32B = 0xCD9E8D57;

inline void round_once(std::array<uint32_t, 4>& ctr, std::array<uint32_t, 2>& key) {
    uint64_t p0 = static_cast<uint64_t>(kM4x32A) * ctr[0];
    uint64_t p1 = static_cast<uint64_t>(kM4x32B) * ctr[2];
    uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW32A;
    key[1] += kW32B;
}

inline std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    for (int i = 0; i < 10; ++i) round_once(ctr, key);
    return ctr;
}

}  // namespace philox

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// One independent random stream, identified entirely by its key and stream
/// coordinates. Streams for distinct coordinates never overlap, and a stream's
/// output does not depend on when (or whether) any other stream is consumed.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream_hi, uint64_t stream_lo)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
          base_{static_cast<uint32_t>(stream_lo), static_cast<uint32_t>(stream_lo >> 32),
                static_cast<uint32_t>(stream_hi), static_cast<uint32_t>(stream_hi >> 32)} {}

    uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    uint64_t next_u64() {
        uint64_t lo = next_u32();
        uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (one value per call; the pair's second
    /// half is discarded to keep the stream layout simple).
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        return mean + stddev * z;
    }

    /// Index in [0, n) with rejection sampling to avoid modulo bias.
    uint64_t below(uint64_t n) {
        if (n == 0) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

private:
    void refill() {
        std::array<uint32_t, 4> ctr = base_;
        ctr[0] ^= static_cast<uint32_t>(block_idx_);
        ctr[1] ^= static_cast<uint32_t>(block_idx_ >> 32);
        buf_ = philox::block(ctr, key_);
        ++block_idx_;
        pos_ = 0;
    }

    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> base_;
    std::array<uint32_t, 4> buf_{};
    uint64_t block_idx_ = 0;
    int pos_ = 4;
};

/// Stream for one sampled trace: the coordinates are exactly the identity of
/// the record being generated, so replaying a run in any order reproduces it.
inline CounterRng trace_stream(uint64_t run_seed, std::string_view question_id,
                               int temp_tenths, int round, int sample_index) {
    uint64_t hi = fnv1a64(question_id);
    uint64_t lo = (static_cast<uint64_t>(static_cast<uint32_t>(temp_tenths)) << 48) ^
                  (static_cast<uint64_t>(static_cast<uint32_t>(round)) << 24) ^
                  static_cast<uint64_t>(static_cast<uint32_t>(sample_index));
    return CounterRng(run_seed, hi, lo);
}

}  // namespace tempscale
