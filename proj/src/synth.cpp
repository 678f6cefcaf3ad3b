// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/synth.hpp"

#include "d2dsim/analysis.hpp"
#include "d2dsim/csv.hpp"
#include "d2dsim/error.hpp"
#include "d2dsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace d2dsim::synth {

namespace {

void validate(const SynthConfig& cfg)
{
    if (cfg.community_count < 1 || cfg.total_users < 1 || !(cfg.total_population > 0.0))
        throw ValidationError("synth: counts must be positive");
    if (cfg.duration_minutes <= 0)
        throw ValidationError("synth: duration must be positive");
    if (!(cfg.jump_alpha > 1.0))
        throw ValidationError("synth: jump_alpha must exceed 1");
    if (!(cfg.mean_departure_rate > 0.0) || !(cfg.mean_return_rate > 0.0))
        throw ValidationError("synth: rates must be positive");
    if (cfg.occupancy_slot_minutes <= 0 ||
        cfg.duration_minutes % cfg.occupancy_slot_minutes != 0)
        throw ValidationError("synth: occupancy slot must divide the duration");
}

double normal01(SplitMix64& rng)
{
    // Box-Muller, one value per call (pinned; the discarded sine keeps the
    // draw count deterministic and simple)
    const double u1 = 1.0 - rng.u01(); // (0, 1]
    const double u2 = rng.u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Largest-remainder apportionment of `total` items proportional to w.
std::vector<std::int64_t> apportion(const std::vector<double>& w, std::int64_t total)
{
    const std::size_t n = w.size();
    double wsum = 0.0;
    for (double v : w)
        wsum += v;
    std::vector<std::int64_t> out(n, 0);
    std::vector<std::pair<double, std::size_t>> frac(n);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double exact = static_cast<double>(total) * w[i] / wsum;
        out[i] = static_cast<std::int64_t>(std::floor(exact));
        assigned += out[i];
        frac[i] = {exact - std::floor(exact), i};
    }
    std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t k = 0; k < frac.size() && assigned < total; ++k, ++assigned)
        out[frac[k].second] += 1;
    while (assigned < total) { // float-rounding leftovers land on the largest
        out[frac[0].second] += 1;
        ++assigned;
    }
    return out;
}

} // namespace

std::vector<double> World::census() const
{
    std::vector<double> v(communities.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = communities[i].population;
    return v;
}

std::vector<double> World::areas() const
{
    std::vector<double> v(communities.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = communities[i].area_km2;
    return v;
}

std::vector<double> World::lats() const
{
    std::vector<double> v(communities.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = communities[i].lat;
    return v;
}

std::vector<double> World::lons() const
{
    std::vector<double> v(communities.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = communities[i].lon;
    return v;
}

World generate_world(const SynthConfig& cfg)
{
    validate(cfg);
    const int C = cfg.community_count;
    SplitMix64 rng(derive_stream(cfg.seed, 0xA11CE));

    World w;
    w.communities.resize(C);
    w.attraction.resize(C);

    // heavy-tailed attraction weights; populations follow them so one
    // community dominates like the economic capital does
    for (int i = 0; i < C; ++i)
        w.attraction[i] = std::pow(1.0 - rng.u01(), -1.0 / cfg.attraction_exponent);
    w.capital = static_cast<int>(
        std::max_element(w.attraction.begin(), w.attraction.end()) - w.attraction.begin());

    // capital sits at the box centre, the rest scatter uniformly
    constexpr double lat0 = 5.0, lon0 = -6.0;
    const double km_per_deg_lat = 6371.0 * std::numbers::pi / 180.0;
    const double km_per_deg_lon = km_per_deg_lat * std::cos(lat0 * std::numbers::pi / 180.0);
    for (int i = 0; i < C; ++i) {
        double x, y;
        if (i == w.capital && C > 1) {
            x = cfg.box_km / 2.0;
            y = cfg.box_km / 2.0;
        } else {
            x = rng.u01() * cfg.box_km;
            y = rng.u01() * cfg.box_km;
        }
        auto& c = w.communities[i];
        c.id = i;
        c.name = "community_" + std::to_string(i);
        c.lat = lat0 + y / km_per_deg_lat;
        c.lon = lon0 + x / km_per_deg_lon;
        c.area_km2 = std::exp(std::log(80.0) + rng.u01() * (std::log(2500.0) - std::log(80.0)));
    }

    const auto pops =
        apportion(w.attraction, static_cast<std::int64_t>(std::llround(cfg.total_population)));
    for (int i = 0; i < C; ++i)
        w.communities[i].population = static_cast<double>(pops[i]);
    return w;
}

namespace {

/// Exact destination law for one origin: each destination owns the
/// power-law mass of its log-distance band (Voronoi in log distance),
/// scaled by the attraction weight. Sampling from this law makes the
/// emitted jump-length distribution follow the target exponent by
/// construction.
std::vector<double> destination_law(int origin, const World& w, double alpha)
{
    const int C = static_cast<int>(w.communities.size());
    std::vector<double> q(C, 0.0);
    if (C == 1)
        return q;
    if (C == 2) {
        q[1 - origin] = 1.0;
        return q;
    }

    std::vector<std::pair<double, int>> dist;
    dist.reserve(C - 1);
    const auto& co = w.communities[origin];
    for (int j = 0; j < C; ++j) {
        if (j == origin)
            continue;
        const auto& cj = w.communities[j];
        dist.emplace_back(distance_km(co.lat, co.lon, cj.lat, cj.lon), j);
    }
    std::sort(dist.begin(), dist.end());

    const double x0 = std::min(1.0, dist.front().first * 0.5);
    const auto survival = [&](double x) { return std::pow(x / x0, 1.0 - alpha); };

    const std::size_t n = dist.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double d = dist[k].first;
        const double lo = k == 0 ? x0 : std::sqrt(dist[k - 1].first * d);
        const double hi = k + 1 < n ? std::sqrt(d * dist[k + 1].first)
                                    : d * std::sqrt(d / dist[k - 1].first);
        const double mass = std::max(0.0, survival(lo) - survival(hi));
        q[dist[k].second] = mass * w.attraction[dist[k].second];
    }
    double total = 0.0;
    for (double v : q)
        total += v;
    if (total > 0.0)
        for (double& v : q)
            v /= total;
    return q;
}

struct WalkLogs {
    CountMat transitions, resident_departures, returns, occupancy;
    std::vector<double> t_home;
    Mat t_visit;
};

} // namespace

GroundTruth generate_corpus(const World& world, const SynthConfig& cfg)
{
    validate(cfg);
    const int C = cfg.community_count;
    if (static_cast<int>(world.communities.size()) != C)
        throw ValidationError("generate_corpus: world/config community count mismatch");

    GroundTruth gt;
    gt.zeta_planted = cfg.mean_return_rate;
    gt.occupancy_slot_minutes = cfg.occupancy_slot_minutes;

    // planted per-community departure intensities (heterogeneous, mean
    // preserved)
    gt.sigma_planted.resize(C);
    {
        SplitMix64 rng(derive_stream(cfg.seed, 0x516A7));
        for (int i = 0; i < C; ++i) {
            const double z = normal01(rng);
            gt.sigma_planted[i] = cfg.mean_departure_rate * std::exp(0.4 * z - 0.08);
        }
    }

    gt.kernel = Mat(C, C, 0.0);
    std::vector<std::vector<double>> kernel_cdf(C);
    for (int i = 0; i < C; ++i) {
        const auto q = destination_law(i, world, cfg.jump_alpha);
        auto& cdf = kernel_cdf[i];
        cdf.resize(C);
        double acc = 0.0;
        for (int j = 0; j < C; ++j) {
            gt.kernel(i, j) = q[j];
            acc += q[j];
            cdf[j] = acc;
        }
    }

    // users distributed across homes proportional to population
    const auto quota = apportion(world.census(), cfg.total_users);
    gt.homes.resize(cfg.total_users);
    {
        int u = 0;
        for (int i = 0; i < C; ++i)
            for (std::int64_t k = 0; k < quota[i]; ++k)
                gt.homes[u++] = i;
    }

    const std::int64_t T = cfg.duration_minutes;
    const std::int64_t slots = T / cfg.occupancy_slot_minutes;
    gt.transitions = CountMat(C, C, 0);
    gt.resident_departures = CountMat(C, C, 0);
    gt.returns = CountMat(C, C, 0);
    gt.occupancy = CountMat(static_cast<std::size_t>(slots), C, 0);
    gt.t_home.assign(C, 0.0);
    gt.t_visit = Mat(C, C, 0.0);
    gt.true_visits.resize(cfg.total_users);

    const double call_rate_max =
        cfg.calls_per_day / 1440.0 * (1.0 + std::abs(cfg.diurnal_amplitude));
    const auto call_rate_at = [&](double t) {
        const double day_frac = std::fmod(t, 1440.0) / 1440.0;
        return cfg.calls_per_day / 1440.0 *
               (1.0 + cfg.diurnal_amplitude *
                          std::sin(2.0 * std::numbers::pi * (day_frac - 0.25)));
    };

    for (int u = 0; u < cfg.total_users; ++u) {
        SplitMix64 rng(derive_stream(cfg.seed, 0x100000 + static_cast<std::uint64_t>(u)));
        const int home = gt.homes[u];
        auto& visits = gt.true_visits[u];

        double t = 0.0;
        int loc = home;
        gt.arrival_events.push_back({u, 0, home, 0.0});

        while (t < static_cast<double>(T)) {
            const double rate = loc == home ? gt.sigma_planted[home] : cfg.mean_return_rate;
            const double dwell = rng.exponential(rate);
            const double seg_end = std::min(t + dwell, static_cast<double>(T));

            if (cfg.generate_calls && call_rate_max > 0.0) {
                double tc = t;
                for (;;) {
                    tc += rng.exponential(call_rate_max);
                    if (tc >= seg_end)
                        break;
                    const double accept = rng.u01();
                    const double mark = rng.u01();
                    if (accept < call_rate_at(tc) / call_rate_max)
                        gt.call_events.push_back(
                            {u, static_cast<std::int64_t>(std::floor(tc)), loc, mark});
                }
            }

            const std::int64_t m_arr = static_cast<std::int64_t>(std::floor(t));
            visits.push_back({loc, m_arr, 0}); // departure fixed below

            const double stay = seg_end - t;
            if (loc == home)
                gt.t_home[home] += stay;
            else
                gt.t_visit(loc, home) += stay;

            t = seg_end;
            if (t >= static_cast<double>(T))
                break;

            int next;
            if (loc == home) {
                const double pick = rng.u01();
                const auto& cdf = kernel_cdf[home];
                next = static_cast<int>(
                    std::lower_bound(cdf.begin(), cdf.end(), pick) - cdf.begin());
                if (next >= C)
                    next = C - 1;
                gt.resident_departures(home, next) += 1;
            } else {
                next = home;
                gt.returns(loc, home) += 1;
            }
            gt.transitions(loc, next) += 1;
            gt.arrival_events.push_back({u, static_cast<std::int64_t>(std::floor(t)), next, 0.0});
            loc = next;
        }

        // close visit intervals on the rounded minute grid
        for (std::size_t k = 0; k + 1 < visits.size(); ++k)
            visits[k].departure = visits[k + 1].arrival;
        if (!visits.empty())
            visits.back().departure = T;

        // true occupancy uses the same rounded visits the CDR is emitted from
        for (const auto& v : visits) {
            const std::int64_t s_begin =
                (v.arrival + cfg.occupancy_slot_minutes - 1) / cfg.occupancy_slot_minutes;
            const std::int64_t s_end =
                (v.departure + cfg.occupancy_slot_minutes - 1) / cfg.occupancy_slot_minutes;
            for (std::int64_t s = s_begin; s < s_end && s < slots; ++s)
                gt.occupancy(static_cast<std::size_t>(s), v.community) += 1;
        }
    }

    // conditional expectation of each extracted nu row: kernel jumps are
    // multinomial, returns are deterministic given the visit record
    gt.expected_nu = Mat(C, C, 0.0);
    for (int i = 0; i < C; ++i) {
        std::int64_t dep_total = 0, row_total = 0;
        for (int j = 0; j < C; ++j) {
            dep_total += gt.resident_departures(i, j);
            row_total += gt.transitions(i, j);
        }
        if (row_total == 0)
            continue;
        const std::int64_t returns_from_i = row_total - dep_total;
        (void)returns_from_i;
        for (int j = 0; j < C; ++j) {
            const double returns_part =
                static_cast<double>(gt.transitions(i, j) - gt.resident_departures(i, j));
            const double expected =
                static_cast<double>(dep_total) * gt.kernel(i, j) + returns_part;
            gt.expected_nu(i, j) = expected / static_cast<double>(row_total);
        }
    }
    return gt;
}

namespace {

std::string emit_events(const std::vector<CallEvent>& events, double keep_fraction)
{
    std::vector<const CallEvent*> kept;
    kept.reserve(events.size());
    for (const auto& e : events)
        if (e.keep_mark < keep_fraction || keep_fraction >= 1.0)
            kept.push_back(&e);
    std::stable_sort(kept.begin(), kept.end(), [](const CallEvent* a, const CallEvent* b) {
        if (a->minute != b->minute)
            return a->minute < b->minute;
        return a->user < b->user;
    });
    std::ostringstream os;
    os << "user_id,timestamp_min,community_id\n";
    for (const CallEvent* e : kept)
        os << 'u' << e->user << ',' << e->minute << ',' << e->community << '\n';
    return os.str();
}

} // namespace

std::string emit_communities_csv(const World& world)
{
    std::ostringstream os;
    os << "community_id,name,lat,lon,area_km2,population\n";
    for (const auto& c : world.communities)
        os << c.id << ',' << c.name << ',' << csv::fmt(c.lat) << ',' << csv::fmt(c.lon) << ','
           << csv::fmt(c.area_km2) << ',' << csv::fmt(c.population) << '\n';
    return os.str();
}

std::string emit_cdr(const GroundTruth& gt)
{
    return emit_events(gt.arrival_events, 1.0);
}

std::string emit_cdr_thinned(const GroundTruth& gt, double keep_fraction)
{
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0))
        throw ValidationError("emit_cdr_thinned: keep fraction must be in (0, 1]");
    if (gt.call_events.empty())
        throw ValidationError("emit_cdr_thinned: corpus was generated without call events");
    return emit_events(gt.call_events, keep_fraction);
}

TrajectorySet ground_truth_trajectories(const GroundTruth& gt, int community_count,
                                        std::int64_t duration_minutes)
{
    TrajectorySet t;
    t.community_count = community_count;
    t.observation_minutes = duration_minutes;
    t.user_ids.resize(gt.true_visits.size());
    for (std::size_t u = 0; u < gt.true_visits.size(); ++u)
        t.user_ids[u] = "u" + std::to_string(u);
    t.visits = gt.true_visits;
    return t;
}

} // namespace d2dsim::synth
