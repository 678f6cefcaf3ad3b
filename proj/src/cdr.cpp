// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/cdr.hpp"

#include "d2dsim/csv.hpp"
#include "d2dsim/error.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <unordered_map>

namespace d2dsim {

std::int64_t TransitionCounts::total_moves() const
{
    std::int64_t n = 0;
    for (auto v : moves.data())
        n += v;
    return n;
}

namespace {

struct RawRecord {
    std::int64_t t;
    int community;
};

std::int64_t parse_int(const std::string& s, std::size_t line_no, const char* what)
{
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ValidationError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    return v;
}

} // namespace

TrajectorySet parse_cdr(std::istream& in, int community_count, std::int64_t observation_minutes)
{
    if (community_count <= 0)
        throw ValidationError("community_count must be positive");
    if (observation_minutes <= 0)
        throw ValidationError("observation window must be positive");

    TrajectorySet out;
    out.community_count = community_count;
    out.observation_minutes = observation_minutes;

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        return out; // empty stream -> empty TrajectorySet
    ++line_no;
    {
        auto f = csv::split_line(line);
        if (f.size() != 3 || f[0] != "user_id" || f[1] != "timestamp_min" ||
            f[2] != "community_id")
            throw ValidationError("line 1: expected header 'user_id,timestamp_min,community_id'");
    }

    std::unordered_map<std::string, std::size_t> user_index;
    std::vector<std::vector<RawRecord>> records; // per user, file order

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        auto f = csv::split_line(line);
        if (f.size() != 3 || f[0].empty())
            throw ValidationError("line " + std::to_string(line_no) + ": malformed CDR record");
        const std::int64_t t = parse_int(f[1], line_no, "timestamp");
        const std::int64_t c = parse_int(f[2], line_no, "community id");
        if (t < 0 || t >= observation_minutes)
            throw ValidationError("line " + std::to_string(line_no) + ": timestamp " +
                                  std::to_string(t) + " outside observation window [0, " +
                                  std::to_string(observation_minutes) + ")");
        if (c < 0 || c >= community_count)
            throw ValidationError("line " + std::to_string(line_no) + ": community id " +
                                  std::to_string(c) + " out of range [0, " +
                                  std::to_string(community_count) + ")");
        auto [it, inserted] = user_index.try_emplace(f[0], out.user_ids.size());
        if (inserted) {
            out.user_ids.push_back(f[0]);
            records.emplace_back();
        }
        records[it->second].push_back({t, static_cast<int>(c)});
    }

    out.visits.resize(records.size());
    for (std::size_t u = 0; u < records.size(); ++u) {
        auto& rec = records[u];
        // CDR exports are commonly unordered; stable sort keeps file order
        // for equal stamps so parsing stays deterministic.
        std::stable_sort(rec.begin(), rec.end(),
                         [](const RawRecord& a, const RawRecord& b) { return a.t < b.t; });
        auto& vis = out.visits[u];
        for (const auto& r : rec) {
            if (!vis.empty() && vis.back().community == r.community)
                continue; // merge consecutive same-community records
            if (!vis.empty())
                vis.back().departure = r.t;
            vis.push_back({r.community, r.t, observation_minutes});
        }
    }
    return out;
}

std::vector<int> assign_home(const TrajectorySet& t)
{
    std::vector<int> homes(t.user_count(), -1);
    std::vector<std::int64_t> dwell(t.community_count, 0);
    std::vector<int> touched;
    for (std::size_t u = 0; u < t.user_count(); ++u) {
        const auto& vis = t.visits[u];
        if (vis.empty())
            continue;
        touched.clear();
        for (const auto& v : vis) {
            if (dwell[v.community] == 0)
                touched.push_back(v.community);
            dwell[v.community] += v.departure - v.arrival;
        }
        int best = -1;
        std::int64_t best_dwell = -1;
        for (int c : touched) {
            // ties break to the smallest community index
            if (dwell[c] > best_dwell || (dwell[c] == best_dwell && c < best)) {
                best = c;
                best_dwell = dwell[c];
            }
        }
        if (best_dwell <= 0)
            best = vis.front().community; // zero total observed time
        homes[u] = best;
        for (int c : touched)
            dwell[c] = 0;
    }
    return homes;
}

TransitionCounts build_transition_counts(const TrajectorySet& t)
{
    const int C = t.community_count;
    TransitionCounts counts{CountMat(C, C, 0), CountMat(C, C, 0)};
    const std::vector<int> homes = assign_home(t);
    for (std::size_t u = 0; u < t.user_count(); ++u) {
        const auto& vis = t.visits[u];
        for (std::size_t k = 1; k < vis.size(); ++k) {
            const int from = vis[k - 1].community;
            const int to = vis[k].community;
            counts.moves(from, to) += 1;
            if (to == homes[u])
                counts.returns_home(from, to) += 1;
        }
    }
    return counts;
}

MobilityParameters compute_nu(const TransitionCounts& counts)
{
    const int C = counts.community_count();
    MobilityParameters m;
    m.nu = Mat(C, C, 0.0);
    m.isolated.assign(C, 0);
    for (int i = 0; i < C; ++i) {
        std::int64_t row_sum = 0;
        for (int j = 0; j < C; ++j)
            row_sum += counts.moves(i, j);
        if (row_sum == 0) {
            m.isolated[i] = 1;
            continue;
        }
        const double inv = 1.0 / static_cast<double>(row_sum);
        for (int j = 0; j < C; ++j)
            m.nu(i, j) = static_cast<double>(counts.moves(i, j)) * inv;
        m.nu(i, i) = 0.0;
    }
    return m;
}

std::vector<double> compute_sigma(const TransitionCounts& counts, std::int64_t time_minutes)
{
    if (time_minutes <= 0)
        throw ValidationError("compute_sigma: time_minutes must be positive");
    const int C = counts.community_count();
    std::vector<double> sigma(C, 0.0);
    for (int i = 0; i < C; ++i) {
        std::int64_t row_sum = 0;
        for (int j = 0; j < C; ++j)
            row_sum += counts.moves(i, j);
        sigma[i] = static_cast<double>(row_sum) / static_cast<double>(time_minutes);
    }
    return sigma;
}

Mat compute_zeta(const TransitionCounts& counts, std::int64_t time_minutes)
{
    if (time_minutes <= 0)
        throw ValidationError("compute_zeta: time_minutes must be positive");
    const int C = counts.community_count();
    Mat zeta(C, C, 0.0);
    for (int j = 0; j < C; ++j)
        for (int i = 0; i < C; ++i)
            zeta(j, i) =
                static_cast<double>(counts.returns_home(j, i)) / static_cast<double>(time_minutes);
    return zeta;
}

MobilityParameters extract_mobility(const TransitionCounts& counts, std::int64_t time_minutes)
{
    MobilityParameters m = compute_nu(counts);
    m.sigma = compute_sigma(counts, time_minutes);
    m.zeta = compute_zeta(counts, time_minutes);
    return m;
}

PerDeviceRates extract_per_device(const TrajectorySet& t)
{
    const int C = t.community_count;
    const std::vector<int> homes = assign_home(t);

    CountMat res_dep(C, C, 0);  // resident departures home -> destination
    CountMat ret(C, C, 0);      // returns [from][home]
    std::vector<double> t_home(C, 0.0);
    Mat t_visit(C, C, 0.0); // [location][home]

    for (std::size_t u = 0; u < t.user_count(); ++u) {
        const auto& vis = t.visits[u];
        if (vis.empty())
            continue;
        const int h = homes[u];
        for (std::size_t k = 0; k < vis.size(); ++k) {
            const auto& v = vis[k];
            const double dwell = static_cast<double>(v.departure - v.arrival);
            if (v.community == h)
                t_home[h] += dwell;
            else
                t_visit(v.community, h) += dwell;
            if (k + 1 < vis.size()) {
                if (v.community == h)
                    res_dep(h, vis[k + 1].community) += 1;
                else if (vis[k + 1].community == h)
                    ret(v.community, h) += 1;
            }
        }
    }

    PerDeviceRates r;
    r.nu = Mat(C, C, 0.0);
    r.sigma.assign(C, 0.0);
    r.zeta = Mat(C, C, 0.0);
    r.isolated.assign(C, 0);
    for (int i = 0; i < C; ++i) {
        std::int64_t dep_total = 0;
        for (int j = 0; j < C; ++j)
            dep_total += res_dep(i, j);
        if (dep_total == 0) {
            r.isolated[i] = 1;
        } else {
            const double inv = 1.0 / static_cast<double>(dep_total);
            for (int j = 0; j < C; ++j)
                r.nu(i, j) = static_cast<double>(res_dep(i, j)) * inv;
            r.nu(i, i) = 0.0;
        }
        if (t_home[i] > 0.0)
            r.sigma[i] = static_cast<double>(dep_total) / t_home[i];
    }
    for (int j = 0; j < C; ++j)
        for (int i = 0; i < C; ++i)
            if (t_visit(j, i) > 0.0)
                r.zeta(j, i) = static_cast<double>(ret(j, i)) / t_visit(j, i);
    return r;
}

DensityMatrix compute_density(const TrajectorySet& t, const std::vector<double>& areas_km2,
                              std::int64_t slot_minutes)
{
    const int C = t.community_count;
    if (static_cast<int>(areas_km2.size()) != C)
        throw ValidationError("compute_density: areas size mismatch");
    for (double a : areas_km2)
        if (!(a > 0.0))
            throw ValidationError("compute_density: areas must be strictly positive");
    if (slot_minutes <= 0 || t.observation_minutes % slot_minutes != 0)
        throw ValidationError("compute_density: slot_minutes must divide the observation window");

    const std::int64_t slots = t.observation_minutes / slot_minutes;
    DensityMatrix d;
    d.slot_minutes = slot_minutes;
    d.areas = areas_km2;
    d.rho = Mat(static_cast<std::size_t>(slots), C, 0.0);

    for (const auto& vis : t.visits) {
        for (const auto& v : vis) {
            // slots whose start lies in [arrival, departure)
            const std::int64_t s_begin = (v.arrival + slot_minutes - 1) / slot_minutes;
            const std::int64_t s_end = (v.departure + slot_minutes - 1) / slot_minutes;
            for (std::int64_t s = s_begin; s < s_end && s < slots; ++s)
                d.rho(static_cast<std::size_t>(s), v.community) += 1.0;
        }
    }
    for (std::int64_t s = 0; s < slots; ++s)
        for (int c = 0; c < C; ++c)
            d.rho(static_cast<std::size_t>(s), c) /= areas_km2[c];
    return d;
}

} // namespace d2dsim
