#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace memevo {

/// Seeded random stream shared by every stochastic operator.
///
/// Draws are derived from raw mt19937_64 output with our own reductions, so a
/// given seed produces the same sequence on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::size_t index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("Rng::index: empty range");
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return static_cast<std::size_t>(x % bound);
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename Container>
    const auto& pick(const Container& c) {
        return c[index(c.size())];
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace memevo
