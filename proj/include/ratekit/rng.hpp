// Deterministic, splittable random streams for the bootstrap and coverage
// simulations. Every trial derives its own generator from (seed, trial
// index), so results are bit-identical for a given seed no matter how the
// trial loop is scheduled.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ratekit/specfun.hpp"

namespace ratekit::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded through splitmix64. Cheap to construct, so making a
// fresh stream per trial is the normal usage pattern.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0x9e3779b97f4a7c15ULL);
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in (0, 1); never returns 0 so logs are safe.
    double next_uniform() {
        const double u = (next_u64() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    // Standard normal via Marsaglia polar.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, q;
        do {
            u = 2.0 * next_uniform() - 1.0;
            v = 2.0 * next_uniform() - 1.0;
            q = u * u + v * v;
        } while (q >= 1.0 || q == 0.0);
        const double f = std::sqrt(-2.0 * std::log(q) / q);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Poisson draw. Knuth product for small means, PTRS transformed
    // rejection (Hormann) for large ones.
    std::uint64_t next_poisson(double mean) {
        if (!(mean >= 0.0)) throw std::domain_error("next_poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        if (mean < 30.0) {
            const double limit = std::exp(-mean);
            std::uint64_t k = 0;
            double prod = next_uniform();
            while (prod > limit) {
                ++k;
                prod *= next_uniform();
            }
            return k;
        }
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            double u = next_uniform() - 0.5;
            double v = next_uniform();
            const double us = 0.5 - std::fabs(u);
            const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            const double log_mean = std::log(mean);
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mean - mean - specfun::detail::log_gamma(k + 1.0)) {
                return static_cast<std::uint64_t>(k);
            }
        }
    }

    // Normal(mean, sd) truncated to strictly positive values.
    double next_truncated_normal_positive(double mean, double sd) {
        if (!(sd > 0.0)) throw std::domain_error("truncated normal: sd must be > 0");
        for (int attempt = 0; attempt < 100000; ++attempt) {
            const double x = mean + sd * next_normal();
            if (x > 0.0) return x;
        }
        throw std::runtime_error("truncated normal: rejection failed (mean far below 0?)");
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ratekit::rng
