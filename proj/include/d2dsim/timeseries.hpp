// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dsim/grid.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace d2dsim {

/// Compartment planes, in CSV column order.
enum Plane : int { PS = 0, PI = 1, PR = 2, PES = 3, PEI = 4, PER = 5 };
inline constexpr int kPlanes = 6;
inline constexpr const char* kPlaneNames[kPlanes] = {"S", "I", "R", "E_S", "E_I", "E_R"};

/// Sampled compartment aggregates: per-location totals and global totals
/// on a fixed time grid.
struct TimeSeries {
    int community_count = 0;
    std::vector<double> times; // minutes
    std::array<Mat, kPlanes> by_community;       // [plane](sample, community)
    std::array<std::vector<double>, kPlanes> global;
    std::string scenario_id;
    std::uint64_t seed = 0;

    std::size_t sample_count() const { return times.size(); }

    void reserve_samples(std::size_t n, int communities);
    void push_sample(double t, const std::array<const double*, kPlanes>& per_community);
};

} // namespace d2dsim
