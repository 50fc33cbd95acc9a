#pragma once

#include <cstdint>
#include <cstddef>

namespace slicelab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Deterministic per-trial random stream (xoshiro256** with splitmix64 state
// derivation). The 256-bit state is built from (seed, stream_id) so that the
// pair -> state map is injective and distinct streams are decorrelated.
// Campaign code derives one stream per trial, which makes aggregate results
// independent of the worker count.
class RandomSource {
public:
    RandomSource(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {
        std::uint64_t a = seed;
        std::uint64_t b = stream_id;
        s_[0] = detail::splitmix64(a);
        s_[1] = detail::splitmix64(a);
        s_[2] = detail::splitmix64(b);
        s_[3] = detail::splitmix64(b);
        // s[0..1] determine seed and s[2..3] determine stream_id, so the
        // state cannot be all zero and the derivation is injective.
        next_u64();
        next_u64();
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, bound). Unbiased via rejection on the top range.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) return 0;
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t s_[4];
};

inline RandomSource derive_stream(std::uint64_t seed, std::uint64_t trial_index) {
    return RandomSource(seed, trial_index);
}

}  // namespace slicelab
