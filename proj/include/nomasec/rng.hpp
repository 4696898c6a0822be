// Seed-scoped random streams.
//
// Every stochastic component draws from a SplitMix64 stream whose seed is a
// pure function of (master seed, stream indices). Work items therefore never
// share generator state, and results do not depend on scheduling.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace nomasec {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// The split function: child seed for `index` under `seed`.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64_mix(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    for (auto i : path) seed = derive_seed(seed, i);
    return seed;
}

/// SplitMix64 as a UniformRandomBitGenerator.
class Stream {
public:
    using result_type = std::uint64_t;

    explicit constexpr Stream(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64_mix(state_);
    }

private:
    std::uint64_t state_;
};

}  // namespace nomasec
