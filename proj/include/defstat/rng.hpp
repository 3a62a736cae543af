#pragma once

#include <cstdint>
#include <random>

namespace defstat {

// Deterministic sampler used by the axiom checkers and property probes.
//
// std::uniform_real_distribution is implementation-defined, so doubles are
// derived from the raw mt19937_64 stream directly: the same seed produces the
// same samples on every platform and standard library.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Strictly positive value in (0, scale]; avoids generating exact zero.
    double positive(double scale) { return scale * (1.0 - unit()); }

    // Integer in [lo, hi], both ends inclusive.
    std::int64_t index(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(eng_() % span);
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

} // namespace defstat
