// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace d2dsim {

double SplitMix64::exponential(double rate)
{
    // u in [0,1) so 1-u is in (0,1] and the log is finite.
    return -std::log(1.0 - u01()) / rate;
}

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t base_seed, std::uint64_t stream_id)
{
    return mix64(base_seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1));
}

namespace {

std::int64_t poisson_inversion(SplitMix64& rng, double mean)
{
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.u01();
    } while (p > limit);
    return k - 1;
}

// Hormann (1993), transformed rejection with squeeze. Valid for mean >= 10.
std::int64_t poisson_ptrs(SplitMix64& rng, double mean)
{
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = rng.u01() - 0.5;
        const double v = rng.u01();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us))
            continue;
        const double k = kf;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(kf);
    }
}

} // namespace

std::int64_t poisson(SplitMix64& rng, double mean)
{
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson: mean must be finite and non-negative");
    if (mean == 0.0)
        return 0;
    if (mean < 10.0)
        return poisson_inversion(rng, mean);
    return poisson_ptrs(rng, mean);
}

} // namespace d2dsim
