#pragma once

// Portable seeded randomness. std::mt19937_64 has a fully specified output
// sequence; the conversions below avoid the implementation-defined standard
// distributions so traces reproduce bit-exactly across toolchains.
//
// Stream splitting: run r of a campaign with master seed m uses
//   splitmix64(m + (r + 1) * 0x9E3779B97F4A7C15)
// as its engine seed. splitmix64 is a bijection on 64-bit words, so distinct
// run indices (below 2^64) always produce distinct seeds.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace rissic {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ull);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p; p == 0 never fires, p == 1 always fires.
    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace rissic
