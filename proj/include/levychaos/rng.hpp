#pragma once

// Reproducible random streams.
//
// Seeding scheme: stream i of master seed s is std::mt19937_64 seeded with
// splitmix64(s ^ splitmix64(i + 1)). Uniforms take the top 53 bits of one
// 64-bit draw; Poisson counts use sequential inversion. Every step is fully
// specified, so the same (seed, index) gives the same draws on any platform.

#include <cstdint>
#include <random>

namespace levychaos {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(seed ^ splitmix64(index + 1));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Poisson(mean) by inversion; mean must be in [0, 700].
    std::uint64_t poisson(double mean);

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace levychaos
