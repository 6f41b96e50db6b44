#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace swiptpep {

// Deterministic random source. Every distribution is synthesized from raw
// mt19937_64 output with fixed arithmetic, so a (seed, stream, chunk) triple
// reproduces the same draw sequence on any platform and any worker count.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent generator for one chunk of one logical stream.
    static Rng for_chunk(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t chunk) {
        std::uint64_t h = master_seed;
        h = mix64(h ^ (0x9e3779b97f4a7c15ULL + stream));
        h = mix64(h ^ (0xc2b2ae3d27d4eb4fULL + chunk));
        return Rng(h);
    }

    // Uniform in (0,1), endpoints excluded.
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    // Standard normal (Box-Muller, two uniforms per call).
    double gaussian() {
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        return r * std::cos(kTwoPi * uniform01());
    }

    // Zero-mean circularly-symmetric complex Gaussian with E|z|^2 = variance.
    // A non-positive variance yields exactly zero but still consumes two
    // uniforms, so draw sequences stay aligned across configurations.
    std::complex<double> complex_gaussian(double variance) {
        const double u1 = uniform01();
        const double u2 = uniform01();
        if (variance <= 0.0) {
            return {0.0, 0.0};
        }
        const double r = std::sqrt(-variance * std::log(u1));
        const double phi = kTwoPi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    static constexpr double kTwoPi = 6.2831853071795864769252867665590058;

    static std::uint64_t mix64(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
};

}  // namespace swiptpep
