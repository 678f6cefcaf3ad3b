// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dsim/cdr.hpp"
#include "d2dsim/timeseries.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace d2dsim {

/// Symmetrized Kullback-Leibler divergence between two distributions over
/// communities. Inputs are normalized, smoothed by +1e-12 per cell and
/// renormalized (the raw formula is undefined on zero cells), then
///   1/2 (sum d1 ln d1/d2 + sum d2 ln d2/d1).
double kl_symmetrized(std::span<const double> d1, std::span<const double> d2);

struct PowerLawFit {
    double alpha = 0.0;
    double std_error = 0.0;
    std::size_t n = 0; // samples at or above x_min
};

/// Continuous maximum-likelihood exponent for samples >= x_min:
/// alpha = 1 + n / sum ln(x/x_min), std error (alpha-1)/sqrt(n).
/// Requires at least 100 qualifying samples.
PowerLawFit fit_power_law(std::span<const double> samples, double x_min);

/// Same estimator with per-value multiplicities (used when jumps come as
/// (distance, count) pairs from a transition matrix).
PowerLawFit fit_power_law_weighted(std::span<const double> values,
                                   std::span<const std::int64_t> weights, double x_min);

struct GraphStats {
    std::vector<double> inflow_share;      // fraction of all transitions ending in i
    std::vector<double> inflow_per_capita; // share divided by population
    std::vector<double> betweenness;       // normalized by N(N-1)
    std::vector<int> out_degree;
    std::vector<int> in_degree;
    std::vector<int> ranking; // communities by inflow share, descending
};

/// In-flow shares plus betweenness centrality on the directed unweighted
/// support of the transition counts (Brandes' algorithm, unit edges).
GraphStats graph_stats(const TransitionCounts& counts, const std::vector<double>& populations);

struct EpidemicSummary {
    double peak_time = 0.0;   // first global-I maximum
    double peak_height = 0.0;
    double cumulative_infected_fraction = 0.0; // final (R + E_R) / N
    double phase1_end = 0.0;  // first sustained multi-community infection
    double phase2_end = 0.0;  // global I peak
    bool no_outbreak = false; // global I never rose above its start
    bool three_phase = false;
};

EpidemicSummary epidemic_summary(const TimeSeries& ts, int origin);

/// Equirectangular distance in km; accurate at country scale.
double distance_km(double lat1, double lon1, double lat2, double lon2);

/// Expand a transition matrix into (distance, count) jump samples using
/// community coordinates.
void jump_samples(const TransitionCounts& counts, const std::vector<double>& lat,
                  const std::vector<double>& lon, std::vector<double>& distances,
                  std::vector<std::int64_t>& weights);

} // namespace d2dsim
