#ifndef GOLAYAE_RNG_HPP
#define GOLAYAE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <span>

namespace golayae::rng {

// Counter-hash PRNG (splitmix64). Fully specified here so that seeded runs
// are bit-reproducible regardless of platform or standard library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1]; safe as a log() argument
    double next_double_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // true with probability 1/2
    bool next_bit() { return (next_u64() >> 63) != 0; }

private:
    std::uint64_t state_;
};

// Standard normal pair via the Box-Muller transform. The transform is spelled
// out (rather than relying on std::normal_distribution) to keep the noise
// stream identical across standard libraries.
inline void gaussian_pair(SplitMix64& g, double& z0, double& z1) {
    const double u1 = g.next_double_open();
    const double u2 = g.next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    z0 = r * std::cos(t);
    z1 = r * std::sin(t);
}

inline double gaussian(SplitMix64& g) {
    double z0, z1;
    gaussian_pair(g, z0, z1);
    return z0;
}

inline void fill_gaussian(SplitMix64& g, std::span<double> out, double stddev = 1.0) {
    std::size_t i = 0;
    for (; i + 1 < out.size(); i += 2) {
        double z0, z1;
        gaussian_pair(g, z0, z1);
        out[i] = stddev * z0;
        out[i + 1] = stddev * z1;
    }
    if (i < out.size()) out[i] = stddev * gaussian(g);
}

// Derives an independent seed for a named substream. Monte-Carlo code derives
// one stream per (seed, role, index) so trials are order-independent.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t role, std::uint64_t index = 0) {
    SplitMix64 g(seed ^ (role * 0xA24BAED4963EE407ULL) ^ (index * 0x9FB21C651E98DF25ULL));
    g.next_u64();
    return g.next_u64();
}

} // namespace golayae::rng

#endif
