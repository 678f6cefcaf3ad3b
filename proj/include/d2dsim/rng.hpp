// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace d2dsim {

/// The repo-wide PRNG: splitmix64. Counter-based (the state advances by a
/// Weyl constant and the output is a finalizer hash of it), seedable, and
/// trivially reproducible across platforms. Every random draw in the
/// project flows through this generator so that (seed, inputs) pins the
/// full output bit stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Exponential waiting time with the given rate (mean 1/rate).
    double exponential(double rate);

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// splitmix64 finalizer as a standalone hash.
std::uint64_t mix64(std::uint64_t z);

/// Deterministic per-entity stream seed (users, replicas, ...).
std::uint64_t derive_stream(std::uint64_t base_seed, std::uint64_t stream_id);

/// Poisson sample with the algorithm pinned for reproducibility:
/// multiplicative inversion below mean 10, Hormann's transformed rejection
/// (PTRS) above. mean must be finite and >= 0.
std::int64_t poisson(SplitMix64& rng, double mean);

} // namespace d2dsim
