#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

// Seeded randomness with a pinned stream order, so every run is reproducible
// from (seed, draw sequence) alone:
//   - engine: std::mt19937_64, seeded with splitmix64(seed),
//   - uniform doubles: top 53 bits of one engine output,
//   - exponential(1): inverse transform, one uniform,
//   - standard normals: Box-Muller, exactly two uniforms per pair,
//   - directions: ceil(d/2) Box-Muller pairs, normalized.
// Monte-Carlo batches derive the seed of trial i as seed ^ i; the splitmix64
// expansion decorrelates the nearby seed values this produces.

namespace hypvis {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return seed ^ index;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform_pos() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    /// Exponential with rate 1.
    double exponential() { return -std::log(uniform_pos()); }

    /// One Box-Muller pair of independent standard normals.
    void normal_pair(double& z0, double& z1) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log1p(-u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        z0 = rad * std::cos(ang);
        z1 = rad * std::sin(ang);
    }

private:
    std::mt19937_64 engine_;
};

/// Uniform direction on S^{d-1} written into out (size d), via normalized
/// Gaussian coordinates. Redraws on a numerically vanishing vector.
inline void sample_direction_into(int d, Rng& rng, std::span<double> out) {
    for (;;) {
        double z0 = 0.0, z1 = 0.0;
        for (int i = 0; i < d; i += 2) {
            rng.normal_pair(z0, z1);
            out[i] = z0;
            if (i + 1 < d) out[i + 1] = z1;
        }
        double n2 = 0.0;
        for (int i = 0; i < d; ++i) n2 += out[i] * out[i];
        if (n2 > 1e-300) {
            const double inv = 1.0 / std::sqrt(n2);
            for (int i = 0; i < d; ++i) out[i] *= inv;
            return;
        }
    }
}

}  // namespace hypvis
