#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace testing_support {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Seeded generator for property tests; the seed is fixed so failures replay.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    // Uniform on (0, 1], never 0.
    double unit_open_closed() { return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

}  // namespace testing_support
