#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace degstein {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic splittable random stream (xoshiro256++ core).
///
/// A stream is addressed by (master seed, path of indices); the state is a
/// SplitMix64 hash chain over the path, so distinct paths give statistically
/// independent streams and results never depend on which worker draws them.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream() : RandomStream(0, {}) {}

    RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t key = seed;
        for (std::uint64_t c : path) {
            std::uint64_t h = c;
            key ^= splitmix64_next(h) + 0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2);
        }
        for (auto& word : state_) word = splitmix64_next(key);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next() {
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

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Unbiased uniform integer in [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        u128 m = static_cast<u128>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<u128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // UniformRandomBitGenerator interface
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ULL; }
    std::uint64_t operator()() { return next(); }

private:
    using u128 = unsigned __int128;
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_;
};

inline RandomStream make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return RandomStream(seed, path);
}

}  // namespace degstein
