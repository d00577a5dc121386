// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risbeam/types.hpp"

#include <cstdint>
#include <random>

namespace risbeam {

/// Seeded random stream. The engine is std::mt19937_64, whose output sequence
/// is fixed by the standard; the uniform and Gaussian transforms are done here
/// rather than through <random> distributions (whose algorithms are
/// implementation-defined) so draws agree across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        has_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

    /// CN(0, variance): independent real and imaginary parts, each N(0, variance/2).
    cd complex_normal(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    double phase() { return kTwoPi * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace risbeam
