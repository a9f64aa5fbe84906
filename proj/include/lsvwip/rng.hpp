#pragma once

// Counter-based seed derivation plus a small xoshiro256** engine.
//
// Every Monte Carlo task gets its own generator derived from
// (master seed, stream id, task index), so ensemble results do not depend on
// the number of threads or on scheduling order.

#include <array>
#include <cmath>
#include <cstdint>

namespace lsvwip {

/// SplitMix64 output function (Steele, Lea & Flood; Vigna's constants).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += UINT64_C(0x9E3779B97F4A7C15);
    return mix64(state);
}

/// Derive a child seed from a parent seed and a counter. Pure function.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t counter) noexcept {
    return mix64(parent ^ mix64(counter + UINT64_C(0x9E3779B97F4A7C15)));
}

/// Named streams keep different consumers of one master seed apart.
enum class Stream : std::uint64_t {
    Centering = 1,
    Density = 2,
    MuY = 3,
    Excursions = 4,
    InducedEnsemble = 5,
    FullEnsemble = 6,
    AltFullEnsemble = 7,
    LevyPaths = 8,
    LapTrials = 9,
    BoundTrials = 10,
    StableSamples = 11,
    Demo = 12,
    Synthetic = 13,
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    /// Generator for task `index` of `stream` under `master`.
    static Rng for_task(std::uint64_t master, Stream stream, std::uint64_t index) noexcept {
        return Rng(derive_seed(derive_seed(master, static_cast<std::uint64_t>(stream)), index));
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard exponential variate.
    double exponential() noexcept { return -std::log(uniform_open()); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace lsvwip
