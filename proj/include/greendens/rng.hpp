#ifndef GREENDENS_RNG_HPP
#define GREENDENS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace greendens {

// Deterministic random source. All distribution transforms are written out
// explicitly so that streams depend only on the seed, not on the standard
// library's <random> distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in the open interval (0, 1); 53-bit resolution, never 0 or 1.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller. Two uniforms per draw, no cached spare.
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

// SplitMix64 step; used to derive independent per-index seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed domains. Two generators given the same user seed by different
// modules must not share a stream: a sample and a field drawn from
// identical gaussian draws would be perfectly correlated (the field would
// come out exactly radial), silently biasing everything downstream.
inline constexpr std::uint64_t kSeedDomainGaussianSample = 0x67617573ULL;
inline constexpr std::uint64_t kSeedDomainTwelveSample = 0x7477656cULL;
inline constexpr std::uint64_t kSeedDomainDipoleField = 0x6669656cULL;

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t domain) {
    return splitmix64(seed ^ splitmix64(domain));
}

} // namespace greendens

#endif
