#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <string_view>

namespace jamscope {

// FNV-1a 64-bit. Used for stable child-seed derivation and spec digests;
// must never change across releases or stored manifests become
// unregenerable.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t state = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ull;
    }
    return state;
}

inline std::uint64_t fnv1a64_append(std::uint64_t state, std::string_view bytes) {
    return fnv1a64(bytes, state == 0 ? 0xcbf29ce484222325ull : state);
}

inline std::uint64_t fnv1a64_append(std::uint64_t state, std::uint64_t v) {
    char buf[8];
    std::memcpy(buf, &v, 8);
    return fnv1a64_append(state, std::string_view(buf, 8));
}

inline std::uint64_t fnv1a64_append(std::uint64_t state, double v) {
    char buf[8];
    std::memcpy(buf, &v, 8);
    return fnv1a64_append(state, std::string_view(buf, 8));
}

// Seeded random source with portable transforms. std::mt19937_64 output is
// fully specified by the standard; the distribution transforms below are
// written out explicitly (Box-Muller, inverse CDF) instead of going through
// std::*_distribution, whose sequences are implementation-defined. Identical
// seeds therefore give bit-identical streams on any conforming platform.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        // 53-bit mantissa fill
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t integer(std::uint64_t n) {
        // rejection sampling to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

    // standard normal via Box-Muller; consumes two uniforms per draw
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Rayleigh(sigma) via inverse CDF
    double rayleigh(double sigma) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return sigma * std::sqrt(-2.0 * std::log(u));
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace jamscope
