#pragma once

// Seedable, reproducible random streams.
//
// All randomness flows from mt19937_64 engines derived as
//   make_stream(seed, stream_id)
// with fixed stream ids per purpose:
//   stream 0 - scenario noise (parent Gaussian / exponential field)
//   stream 1 - Method II exclusion/resampling draws
// A multi-replicate run gives replicate r the base seed `seed + r`, so
// replicate 0 reproduces a single run with the same seed exactly.
// Samplers are hand-rolled on top of the engine's raw 64-bit output so the
// value stream does not depend on the standard library's distribution
// implementations.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace fdrl {

inline constexpr std::uint64_t stream_noise = 0;
inline constexpr std::uint64_t stream_resample = 1;

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over seed ^ f(stream)
    std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL + 0xBF58476D1CE4E5B9ULL);
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(mix_seed(seed, stream));
}

inline std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t replicate) {
    return base + replicate;
}

// uniform on [0,1) with 53 random bits
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// uniform index in [0, n)
inline std::size_t uniform_index(std::mt19937_64& eng, std::size_t n) {
    return static_cast<std::size_t>(uniform01(eng) * static_cast<double>(n)) % n;
}

inline double exponential1(std::mt19937_64& eng) {
    double u = uniform01(eng);
    return -std::log(1.0 - u);
}

// Box-Muller pair, second value cached
struct GaussSampler {
    std::mt19937_64 eng;
    bool have_spare = false;
    double spare = 0.0;

    explicit GaussSampler(std::mt19937_64 e) : eng(std::move(e)) {}

    double operator()() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = uniform01(eng);
        double u2 = uniform01(eng);
        double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }
};

}  // namespace fdrl
