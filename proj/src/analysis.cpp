// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/analysis.hpp"

#include "d2dsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>

namespace d2dsim {

double kl_symmetrized(std::span<const double> d1, std::span<const double> d2)
{
    if (d1.size() != d2.size())
        throw ValidationError("kl_symmetrized: dimension mismatch");
    if (d1.empty())
        throw ValidationError("kl_symmetrized: empty distributions");

    constexpr double eps = 1e-12;
    const auto smooth = [](std::span<const double> d) {
        double total = 0.0;
        for (double v : d) {
            if (!(v >= 0.0))
                throw ValidationError("kl_symmetrized: negative mass");
            total += v;
        }
        if (!(total > 0.0))
            throw ValidationError("kl_symmetrized: zero distribution");
        std::vector<double> out(d.size());
        double smoothed_total = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            out[i] = d[i] / total + eps;
            smoothed_total += out[i];
        }
        for (double& v : out)
            v /= smoothed_total;
        return out;
    };

    const std::vector<double> p = smooth(d1);
    const std::vector<double> q = smooth(d2);
    double forward = 0.0, backward = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        forward += p[i] * std::log(p[i] / q[i]);
        backward += q[i] * std::log(q[i] / p[i]);
    }
    return 0.5 * (forward + backward);
}

PowerLawFit fit_power_law(std::span<const double> samples, double x_min)
{
    if (!(x_min > 0.0))
        throw ValidationError("fit_power_law: x_min must be positive");
    double log_sum = 0.0;
    std::size_t n = 0;
    for (double x : samples) {
        if (x < x_min)
            continue;
        log_sum += std::log(x / x_min);
        ++n;
    }
    if (n < 100)
        throw ValidationError("fit_power_law: need >= 100 samples above x_min, got " +
                              std::to_string(n));
    PowerLawFit fit;
    fit.n = n;
    fit.alpha = 1.0 + static_cast<double>(n) / log_sum;
    fit.std_error = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(n));
    return fit;
}

PowerLawFit fit_power_law_weighted(std::span<const double> values,
                                   std::span<const std::int64_t> weights, double x_min)
{
    if (values.size() != weights.size())
        throw ValidationError("fit_power_law_weighted: size mismatch");
    if (!(x_min > 0.0))
        throw ValidationError("fit_power_law_weighted: x_min must be positive");
    double log_sum = 0.0;
    std::int64_t n = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < x_min || weights[i] <= 0)
            continue;
        log_sum += static_cast<double>(weights[i]) * std::log(values[i] / x_min);
        n += weights[i];
    }
    if (n < 100)
        throw ValidationError("fit_power_law_weighted: need >= 100 samples above x_min");
    PowerLawFit fit;
    fit.n = static_cast<std::size_t>(n);
    fit.alpha = 1.0 + static_cast<double>(n) / log_sum;
    fit.std_error = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(n));
    return fit;
}

namespace {

// Brandes (2001) on the unweighted directed support.
std::vector<double> brandes_betweenness(const CountMat& moves)
{
    const int n = static_cast<int>(moves.rows());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && moves(i, j) > 0)
                adj[i].push_back(j);

    std::vector<double> centrality(n, 0.0);
    std::vector<int> dist(n), order;
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<int>> preds(n);
    order.reserve(n);

    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds)
            p.clear();
        order.clear();

        std::deque<int> queue;
        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (int w : adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int v : preds[w])
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s)
                centrality[w] += delta[w];
        }
    }
    if (n > 1) {
        const double norm = 1.0 / (static_cast<double>(n) * (n - 1));
        for (double& c : centrality)
            c *= norm;
    }
    return centrality;
}

} // namespace

GraphStats graph_stats(const TransitionCounts& counts, const std::vector<double>& populations)
{
    const int C = counts.community_count();
    if (static_cast<int>(populations.size()) != C)
        throw ValidationError("graph_stats: populations size mismatch");

    GraphStats g;
    g.inflow_share.assign(C, 0.0);
    g.inflow_per_capita.assign(C, 0.0);
    g.out_degree.assign(C, 0);
    g.in_degree.assign(C, 0);

    std::int64_t total = 0;
    for (int i = 0; i < C; ++i)
        for (int j = 0; j < C; ++j) {
            const std::int64_t m = counts.moves(i, j);
            if (i != j && m > 0) {
                g.out_degree[i] += 1;
                g.in_degree[j] += 1;
            }
            total += m;
            g.inflow_share[j] += static_cast<double>(m);
        }
    if (total > 0)
        for (double& v : g.inflow_share)
            v /= static_cast<double>(total);
    for (int i = 0; i < C; ++i)
        g.inflow_per_capita[i] =
            populations[i] > 0.0 ? g.inflow_share[i] / populations[i] : 0.0;

    g.betweenness = brandes_betweenness(counts.moves);

    g.ranking.resize(C);
    std::iota(g.ranking.begin(), g.ranking.end(), 0);
    std::stable_sort(g.ranking.begin(), g.ranking.end(), [&](int a, int b) {
        return g.inflow_share[a] > g.inflow_share[b];
    });
    return g;
}

EpidemicSummary epidemic_summary(const TimeSeries& ts, int origin)
{
    (void)origin;
    if (ts.sample_count() == 0)
        throw ValidationError("epidemic_summary: empty time series");

    const auto& gI = ts.global[PI];
    const auto& gEI = ts.global[PEI];
    const std::size_t n = ts.sample_count();

    EpidemicSummary s;

    std::size_t peak_idx = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (gI[k] > gI[peak_idx])
            peak_idx = k; // strict >, so ties keep the earliest
    s.peak_time = ts.times[peak_idx];
    s.peak_height = gI[peak_idx];

    bool rose = false;
    for (std::size_t k = 1; k < n && !rose; ++k)
        rose = gI[k] > gI[0];
    s.no_outbreak = !rose;

    double total = 0.0;
    for (int plane = 0; plane < kPlanes; ++plane)
        total += ts.global[plane][0];
    const double final_r = ts.global[PR][n - 1] + ts.global[PER][n - 1];
    s.cumulative_infected_fraction = total > 0.0 ? final_r / total : 0.0;

    // phase 1 ends at the first sample where more than one community is
    // infected and stays so through the next sample
    const auto infected_communities = [&](std::size_t k) {
        int cnt = 0;
        for (int c = 0; c < ts.community_count; ++c)
            if (ts.by_community[PI](k, c) > 0.0)
                ++cnt;
        return cnt;
    };
    std::size_t p1 = peak_idx;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (infected_communities(k) > 1 && infected_communities(k + 1) > 1) {
            p1 = k;
            break;
        }
    }
    p1 = std::min(p1, peak_idx);
    s.phase1_end = ts.times[p1];
    s.phase2_end = s.peak_time;

    const double final_i = gI[n - 1] + gEI[n - 1];
    s.three_phase = !s.no_outbreak && s.phase1_end > ts.times.front() &&
                    s.peak_time > s.phase1_end && final_i < 0.5 * s.peak_height;
    return s;
}

double distance_km(double lat1, double lon1, double lat2, double lon2)
{
    constexpr double deg = std::numbers::pi / 180.0;
    constexpr double earth_radius_km = 6371.0;
    const double mean_lat = 0.5 * (lat1 + lat2) * deg;
    const double dx = (lon2 - lon1) * deg * std::cos(mean_lat);
    const double dy = (lat2 - lat1) * deg;
    return earth_radius_km * std::sqrt(dx * dx + dy * dy);
}

void jump_samples(const TransitionCounts& counts, const std::vector<double>& lat,
                  const std::vector<double>& lon, std::vector<double>& distances,
                  std::vector<std::int64_t>& weights)
{
    const int C = counts.community_count();
    if (static_cast<int>(lat.size()) != C || static_cast<int>(lon.size()) != C)
        throw ValidationError("jump_samples: coordinate size mismatch");
    distances.clear();
    weights.clear();
    for (int i = 0; i < C; ++i)
        for (int j = 0; j < C; ++j) {
            const std::int64_t m = counts.moves(i, j);
            if (i == j || m == 0)
                continue;
            distances.push_back(distance_km(lat[i], lon[i], lat[j], lon[j]));
            weights.push_back(m);
        }
}

} // namespace d2dsim
