// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/stochastic.hpp"

#include "d2dsim/error.hpp"
#include "d2dsim/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <numeric>
#include <thread>

namespace d2dsim {

namespace {
constexpr double kTauMin = 0.001; // minutes
}

std::int64_t IntegerState::home_row_total(int home) const
{
    std::int64_t total = 0;
    for (int s = 0; s < kPlanes; ++s) {
        const std::int64_t* row = plane_row(s, home);
        for (int j = 0; j < communities; ++j)
            total += row[j];
    }
    return total;
}

IntegerState integerize_steady_state(const SteadyState& ss)
{
    const int C = static_cast<int>(ss.n_star.rows());
    IntegerState s(C);
    std::vector<std::pair<double, int>> frac(C);
    for (int i = 0; i < C; ++i) {
        const double* row = ss.n_star.row(i);
        double total = 0.0;
        for (int j = 0; j < C; ++j)
            total += row[j];
        const std::int64_t target = std::llround(total);
        std::int64_t assigned = 0;
        for (int j = 0; j < C; ++j) {
            const std::int64_t fl = static_cast<std::int64_t>(std::floor(row[j]));
            s.at(PS, i, j) = fl;
            assigned += fl;
            frac[j] = {row[j] - static_cast<double>(fl), j};
        }
        std::int64_t rem = target - assigned;
        // largest remainders first; ties to the smaller index
        std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first)
                return a.first > b.first;
            return a.second < b.second;
        });
        for (int k = 0; k < C && rem > 0; ++k, --rem)
            s.at(PS, i, frac[k].second) += 1;
    }
    return s;
}

void seed_integer_infection(IntegerState& s, const SeedSpec& spec,
                            std::vector<std::string>* warnings)
{
    const int C = s.communities;
    if (spec.origin_community < 0 || spec.origin_community >= C)
        throw ValidationError("seed_integer_infection: origin community out of range");
    if (!(spec.epsilon_fraction > 0.0 && spec.epsilon_fraction < 1.0))
        throw ValidationError("seed_integer_infection: epsilon must satisfy 0 < eps < 1");
    const int o = spec.origin_community;
    const std::int64_t home = s.at(PS, o, o);
    std::int64_t seeded = std::llround(spec.epsilon_fraction * static_cast<double>(home));
    if (seeded == 0 && warnings)
        warnings->push_back("seed_integer_infection: epsilon rounds to zero devices");
    if (seeded >= home && home > 0) {
        seeded = home - 1;
        if (warnings)
            warnings->push_back("seed_integer_infection: seed clamped below the home population");
    }
    s.at(PS, o, o) -= seeded;
    s.at(PI, o, o) += seeded;
}

void move_to_latent(IntegerState& s, double fraction)
{
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw ValidationError("move_to_latent: fraction must be in [0, 1)");
    if (fraction == 0.0)
        return;
    const int C = s.communities;
    constexpr int pairs[3][2] = {{PS, PES}, {PI, PEI}, {PR, PER}};
    for (auto [active, latent] : pairs) {
        for (int i = 0; i < C; ++i) {
            std::int64_t* a = s.plane_row(active, i);
            std::int64_t* l = s.plane_row(latent, i);
            for (int j = 0; j < C; ++j) {
                const std::int64_t moved = std::llround(fraction * static_cast<double>(a[j]));
                a[j] -= moved;
                l[j] += moved;
            }
        }
    }
}

TauLeapSimulator::TauLeapSimulator(const ModelParameters& p, const IntegerState& initial)
    : params_(&p)
{
    const std::size_t C = p.n_star_loc.size();
    if (static_cast<std::size_t>(initial.communities) != C)
        throw ValidationError("TauLeapSimulator: state/parameter dimension mismatch");

    dep_ = Mat(C, C, 0.0);
    zr_ = Mat(C, C, 0.0);
    for (std::size_t i = 0; i < C; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
            dep_(i, j) = p.mobility.sigma[i] * p.mobility.nu(i, j);
            zr_(i, j) = p.mobility.zeta(j, i);
        }
        dep_(i, i) = 0.0;
        zr_(i, i) = 0.0;
    }
    lam_coef_.assign(C, 0.0);
    for (std::size_t j = 0; j < C; ++j) {
        if (p.n_star_loc[j] > 0.0) {
            lam_coef_[j] = p.beta[j] * p.k_mean[j] / p.n_star_loc[j];
        } else {
            std::int64_t occ = 0;
            for (int plane = 0; plane < kPlanes; ++plane)
                for (std::size_t i = 0; i < C; ++i)
                    occ += initial.at(plane, static_cast<int>(i), static_cast<int>(j));
            if (occ > 0)
                throw StructuralError("community " + std::to_string(j) +
                                      " has occupants but zero steady-state population");
        }
    }
    lam_.assign(C, 0.0);
    i_loc_.assign(C, 0.0);

    // The reachable cells never grow: departures go only where dep > 0 and
    // returns go home, so the support is the dep graph plus anything
    // occupied at the start.
    away_.assign(C, {});
    for (std::size_t i = 0; i < C; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
            if (i == j)
                continue;
            bool in_support = dep_(i, j) > 0.0;
            for (int plane = 0; plane < kPlanes && !in_support; ++plane)
                in_support = initial.at(plane, static_cast<int>(i), static_cast<int>(j)) > 0;
            if (in_support)
                away_[i].push_back(static_cast<int>(j));
        }
    }
    delta_.assign(initial.x.size(), 0);
    touched_.reserve(1024);
}

void TauLeapSimulator::refresh_infection_force(const IntegerState& s)
{
    const int C = s.communities;
    std::fill(i_loc_.begin(), i_loc_.end(), 0.0);
    for (int i = 0; i < C; ++i) {
        i_loc_[i] += static_cast<double>(s.at(PI, i, i));
        for (int j : away_[i])
            i_loc_[j] += static_cast<double>(s.at(PI, i, j));
    }
    for (int j = 0; j < C; ++j)
        lam_[j] = lam_coef_[j] * i_loc_[j];
}

// Canonical channel order: homes ascending; per home first the home cell,
// then away cells ascending; per cell Depart/Return per plane (S..E_R,
// destinations ascending), then Infect, Recover, Sleep S/I/R, Wake S/I/R,
// LatentRecover. The tau-leap draws consume randomness in exactly this
// order, which is what makes runs reproducible.
template <class Fn>
void TauLeapSimulator::for_each_channel(const IntegerState& s, Fn&& fn) const
{
    const ModelParameters& p = *params_;
    const int C = s.communities;
    for (int i = 0; i < C; ++i) {
        // home cell
        for (int plane = 0; plane < kPlanes; ++plane) {
            const std::int64_t n = s.at(plane, i, i);
            if (n <= 0)
                continue;
            for (int j : away_[i]) {
                const double r = dep_(i, j) * static_cast<double>(n);
                if (r > 0.0)
                    fn(ChannelKind::Depart, plane, i, i, j, r);
            }
        }
        const auto cell_channels = [&](int loc) {
            const double nd_s = static_cast<double>(s.at(PS, i, loc));
            const double nd_i = static_cast<double>(s.at(PI, i, loc));
            const double nd_r = static_cast<double>(s.at(PR, i, loc));
            const double nd_es = static_cast<double>(s.at(PES, i, loc));
            const double nd_ei = static_cast<double>(s.at(PEI, i, loc));
            const double nd_er = static_cast<double>(s.at(PER, i, loc));
            if (const double r = lam_[loc] * nd_s; r > 0.0)
                fn(ChannelKind::Infect, PS, i, loc, -1, r);
            if (const double r = p.delta[loc] * nd_i; r > 0.0)
                fn(ChannelKind::Recover, PI, i, loc, -1, r);
            if (const double r = p.mu_s[loc] * nd_s; r > 0.0)
                fn(ChannelKind::SleepS, PS, i, loc, -1, r);
            if (const double r = p.mu_i[loc] * nd_i; r > 0.0)
                fn(ChannelKind::SleepI, PI, i, loc, -1, r);
            if (const double r = p.mu_r[loc] * nd_r; r > 0.0)
                fn(ChannelKind::SleepR, PR, i, loc, -1, r);
            if (const double r = p.alpha_s[loc] * nd_es; r > 0.0)
                fn(ChannelKind::WakeS, PES, i, loc, -1, r);
            if (const double r = p.alpha_i[loc] * nd_ei; r > 0.0)
                fn(ChannelKind::WakeI, PEI, i, loc, -1, r);
            if (const double r = p.alpha_r[loc] * nd_er; r > 0.0)
                fn(ChannelKind::WakeR, PER, i, loc, -1, r);
            if (const double r = p.gamma[loc] * nd_ei; r > 0.0)
                fn(ChannelKind::LatentRecover, PEI, i, loc, -1, r);
        };
        cell_channels(i);
        for (int j : away_[i]) {
            for (int plane = 0; plane < kPlanes; ++plane) {
                const std::int64_t n = s.at(plane, i, j);
                if (n <= 0)
                    continue;
                const double r = zr_(i, j) * static_cast<double>(n);
                if (r > 0.0)
                    fn(ChannelKind::Return, plane, i, j, -1, r);
            }
            cell_channels(j);
        }
    }
}

namespace {

struct Stoich {
    int from_plane, to_plane;
};

Stoich exchange_for(ChannelKind kind)
{
    switch (kind) {
    case ChannelKind::Infect: return {PS, PI};
    case ChannelKind::Recover: return {PI, PR};
    case ChannelKind::SleepS: return {PS, PES};
    case ChannelKind::SleepI: return {PI, PEI};
    case ChannelKind::SleepR: return {PR, PER};
    case ChannelKind::WakeS: return {PES, PS};
    case ChannelKind::WakeI: return {PEI, PI};
    case ChannelKind::WakeR: return {PER, PR};
    case ChannelKind::LatentRecover: return {PEI, PR};
    default: return {-1, -1};
    }
}

} // namespace

std::uint64_t TauLeapSimulator::attempt(IntegerState& s, double tau, SplitMix64& rng, int depth)
{
    const int C = s.communities;
    const auto cell_index = [C](int plane, int home, int loc) {
        return (static_cast<std::size_t>(plane) * C + home) * C + loc;
    };

    refresh_infection_force(s);

    touched_.clear();
    for_each_channel(s, [&](ChannelKind kind, int plane, int home, int loc, int dest, double rate) {
        const std::int64_t count = poisson(rng, rate * tau);
        if (count == 0)
            return;
        std::size_t from, to;
        if (kind == ChannelKind::Depart) {
            from = cell_index(plane, home, home);
            to = cell_index(plane, home, dest);
        } else if (kind == ChannelKind::Return) {
            from = cell_index(plane, home, loc);
            to = cell_index(plane, home, home);
        } else {
            const Stoich ex = exchange_for(kind);
            from = cell_index(ex.from_plane, home, loc);
            to = cell_index(ex.to_plane, home, loc);
        }
        touched_.push_back(from);
        touched_.push_back(to);
        delta_[from] -= count;
        delta_[to] += count;
    });

    bool ok = true;
    for (std::size_t idx : touched_)
        if (s.x[idx] + delta_[idx] < 0) {
            ok = false;
            break;
        }

    if (ok) {
        for (std::size_t idx : touched_) {
            s.x[idx] += delta_[idx];
            delta_[idx] = 0; // duplicates in touched_ then add zero
        }
        s.time += tau;
        return 0;
    }

    for (std::size_t idx : touched_)
        delta_[idx] = 0;

    const double half = tau / 2.0;
    if (half < kTauMin)
        throw SimulationError("tau-leap: tau underflow below " + std::to_string(kTauMin) +
                              " min at t = " + std::to_string(s.time));
    std::uint64_t halvings = 1;
    halvings += attempt(s, half, rng, depth + 1);
    halvings += attempt(s, half, rng, depth + 1);
    return halvings;
}

std::uint64_t TauLeapSimulator::step(IntegerState& s, double tau, SplitMix64& rng)
{
    if (!(tau > 0.0))
        throw ValidationError("tau-leap: tau must be positive");
    return attempt(s, tau, rng, 0);
}

std::vector<EventChannel> channel_propensities(const IntegerState& s, const ModelParameters& p)
{
    TauLeapSimulator sim(p, s);
    sim.refresh_infection_force(s);
    std::vector<EventChannel> out;
    sim.for_each_channel(s, [&](ChannelKind kind, int plane, int home, int loc, int dest,
                                double rate) {
        EventChannel c;
        c.kind = kind;
        c.plane = plane;
        c.home = home;
        c.location = loc;
        c.destination = dest;
        c.rate = rate;
        out.push_back(c);
    });
    return out;
}

StochasticResult simulate(const IntegerState& initial, const ModelParameters& p, double tau,
                          double horizon, double sample_every, std::uint64_t seed)
{
    if (!(tau > 0.0))
        throw ValidationError("simulate: tau must be positive");
    if (horizon < 0.0)
        throw ValidationError("simulate: horizon must be non-negative");
    const auto near_int = [](double v) { return std::abs(v - std::round(v)) < 1e-9; };
    if (horizon > 0.0) {
        if (sample_every < tau || !near_int(sample_every / tau))
            throw ValidationError("simulate: sample_every must be a positive multiple of tau");
        if (!near_int(horizon / sample_every))
            throw ValidationError("simulate: horizon must be a multiple of sample_every");
    }

    const int C = initial.communities;
    TauLeapSimulator sim(p, initial);
    SplitMix64 rng(seed);

    StochasticResult result;
    IntegerState state = initial;

    const std::size_t samples =
        horizon > 0.0 ? static_cast<std::size_t>(std::llround(horizon / sample_every)) : 0;
    const std::size_t leaps_per_sample =
        horizon > 0.0 ? static_cast<std::size_t>(std::llround(sample_every / tau)) : 0;

    result.series.reserve_samples(samples + 1, C);
    result.series.seed = seed;

    Mat loc(kPlanes, static_cast<std::size_t>(C), 0.0);
    const auto sample = [&](double t) {
        for (int plane = 0; plane < kPlanes; ++plane) {
            std::memset(loc.row(plane), 0, sizeof(double) * C);
            for (int i = 0; i < C; ++i) {
                const std::int64_t* row = state.plane_row(plane, i);
                double* acc = loc.row(plane);
                for (int j = 0; j < C; ++j)
                    acc[j] += static_cast<double>(row[j]);
            }
        }
        result.series.push_sample(
            t, {loc.row(0), loc.row(1), loc.row(2), loc.row(3), loc.row(4), loc.row(5)});
    };

    sample(state.time);
    for (std::size_t k = 0; k < samples; ++k) {
        for (std::size_t leap = 0; leap < leaps_per_sample; ++leap)
            result.tau_halvings += sim.step(state, tau, rng);
        sample(state.time);
    }
    result.final_state = std::move(state);
    return result;
}

EnsembleResult run_ensemble(const IntegerState& initial, const ModelParameters& p, double tau,
                            double horizon, double sample_every, std::size_t n_replicas,
                            std::uint64_t base_seed, unsigned threads)
{
    if (n_replicas < 1)
        throw ValidationError("run_ensemble: need at least one replica");

    EnsembleResult out;
    out.seeds.resize(n_replicas);
    for (std::size_t r = 0; r < n_replicas; ++r)
        out.seeds[r] = base_seed + r;

    std::vector<StochasticResult> results(n_replicas);
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, n_replicas));
    if (workers == 1) {
        for (std::size_t r = 0; r < n_replicas; ++r)
            results[r] = simulate(initial, p, tau, horizon, sample_every, out.seeds[r]);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t r = next.fetch_add(1);
                    if (r >= n_replicas)
                        return;
                    results[r] = simulate(initial, p, tau, horizon, sample_every, out.seeds[r]);
                }
            });
        for (auto& t : pool)
            t.join();
    }

    out.replicas.reserve(n_replicas);
    for (auto& r : results) {
        out.tau_halvings += r.tau_halvings;
        out.replicas.push_back(std::move(r.series));
    }

    // mean/std over identical sample grids, merged in replica order
    const TimeSeries& first = out.replicas.front();
    const std::size_t samples = first.sample_count();
    const int C = first.community_count;
    out.mean.reserve_samples(samples, C);
    out.mean.times = first.times;
    const double n = static_cast<double>(n_replicas);
    for (int plane = 0; plane < kPlanes; ++plane) {
        out.mean.global[plane].assign(samples, 0.0);
        out.global_std[plane].assign(samples, 0.0);
        for (const auto& rep : out.replicas)
            for (std::size_t k = 0; k < samples; ++k)
                out.mean.global[plane][k] += rep.global[plane][k];
        for (std::size_t k = 0; k < samples; ++k)
            out.mean.global[plane][k] /= n;
        if (n_replicas > 1) {
            for (const auto& rep : out.replicas)
                for (std::size_t k = 0; k < samples; ++k) {
                    const double d = rep.global[plane][k] - out.mean.global[plane][k];
                    out.global_std[plane][k] += d * d;
                }
            for (std::size_t k = 0; k < samples; ++k)
                out.global_std[plane][k] = std::sqrt(out.global_std[plane][k] / (n - 1.0));
        }
        out.mean.by_community[plane].fill(0.0);
        for (const auto& rep : out.replicas) {
            const auto& g = rep.by_community[plane];
            auto& m = out.mean.by_community[plane];
            for (std::size_t k = 0; k < samples; ++k)
                for (int c = 0; c < C; ++c)
                    m(k, c) += g(k, c);
        }
        auto& m = out.mean.by_community[plane];
        for (std::size_t k = 0; k < samples; ++k)
            for (int c = 0; c < C; ++c)
                m(k, c) /= n;
    }
    return out;
}

} // namespace d2dsim
