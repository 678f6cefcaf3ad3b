// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/timeseries.hpp"

#include "d2dsim/kernels.hpp"

#include <cstring>

namespace d2dsim {

void TimeSeries::reserve_samples(std::size_t n, int communities)
{
    community_count = communities;
    times.reserve(n);
    for (int s = 0; s < kPlanes; ++s) {
        by_community[s] = Mat(0, 0);
        global[s].reserve(n);
    }
    // Mat has no reserve; rebuild with the final shape and track fill level
    // through times.size() instead. Samples are appended row-wise below.
    for (int s = 0; s < kPlanes; ++s)
        by_community[s] = Mat(n, static_cast<std::size_t>(communities), 0.0);
}

void TimeSeries::push_sample(double t, const std::array<const double*, kPlanes>& per_community)
{
    const std::size_t row = times.size();
    const std::size_t C = static_cast<std::size_t>(community_count);
    times.push_back(t);
    const auto& k = kern::active();
    for (int s = 0; s < kPlanes; ++s) {
        std::memcpy(by_community[s].row(row), per_community[s], C * sizeof(double));
        global[s].push_back(k.sum(per_community[s], C));
    }
}

} // namespace d2dsim
