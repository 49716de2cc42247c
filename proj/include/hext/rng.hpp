#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hext {

// Deterministic random source. All draws are derived from mt19937_64
// output words directly (no std distributions), so a given seed yields
// the same stream on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
        engine_.seed(seq);
    }

    // Independent stream per (seed, trial); trial results do not depend on
    // the order trials are executed in.
    static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
        Rng r(0);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
        r.engine_.seed(seq);
        return r;
    }

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform strictly inside (lo, hi).
    double open_interval(double lo, double hi) {
        for (;;) {
            double v = lo + (hi - lo) * uniform();
            if (v > lo && v < hi) return v;
        }
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        for (;;) {
            std::uint64_t v = engine_();
            if (v < limit) return v % n;
        }
    }

    // Standard normal via Box-Muller; the spare value is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace hext
