#pragma once

#include <cstdint>
#include <initializer_list>

namespace splitcount {

// splitmix64 finalizer; used both to expand seeds and to derive stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Reproducible random stream (xoshiro256++ core).
///
/// Streams are never shared: every sample, chain, or control decision derives
/// its own stream from (seed, purpose, indices), so results do not depend on
/// thread count or scheduling order.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) noexcept {
        std::uint64_t z = key;
        for (auto& w : state_) {
            z = mix64(z);
            w = z;
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
            state_[0] = 0x9e3779b97f4a7c15ULL;
    }

    /// Derive an independent stream from a root seed and a short path of
    /// indices (purpose tag, iteration, chain index, ...).
    static RngStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
        std::uint64_t k = mix64(seed ^ 0x8f1bbcdcbfa53e0bULL);
        for (std::uint64_t v : path) k = mix64(k ^ mix64(v));
        return RngStream(k);
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Unbiased integer in [0, n). Lemire's multiply-reject method; n >= 1.
    std::uint64_t below(std::uint64_t n) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool coin() noexcept { return (next_u64() >> 63) != 0; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Stream purpose tags. Keeping them distinct guarantees no accidental reuse
// of a stream between pipeline stages of the same run.
enum StreamPurpose : std::uint64_t {
    kStreamInitialSample = 1,
    kStreamChain = 2,
    kStreamIterControl = 3,
    kStreamCapBatch = 4,
    kStreamEcapPool = 5,
    kStreamEcapAux = 6,
    kStreamEcapInner = 7,
};

}  // namespace splitcount
