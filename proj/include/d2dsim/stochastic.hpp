// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dsim/dynamics.hpp"
#include "d2dsim/rng.hpp"
#include "d2dsim/timeseries.hpp"

#include <cstdint>
#include <vector>

namespace d2dsim {

/// Integer device counts, same plane/home/location layout as
/// CompartmentState. Events move devices between cells of one home row,
/// so home-row totals are invariant by construction.
struct IntegerState {
    int communities = 0;
    double time = 0.0;
    std::vector<std::int64_t> x;

    IntegerState() = default;
    explicit IntegerState(int c)
        : communities(c), x(static_cast<std::size_t>(kPlanes) * c * c, 0) {}

    std::int64_t* plane_row(int plane, int home)
    {
        return x.data() + (static_cast<std::size_t>(plane) * communities + home) * communities;
    }
    const std::int64_t* plane_row(int plane, int home) const
    {
        return x.data() + (static_cast<std::size_t>(plane) * communities + home) * communities;
    }
    std::int64_t& at(int plane, int home, int loc) { return plane_row(plane, home)[loc]; }
    std::int64_t at(int plane, int home, int loc) const { return plane_row(plane, home)[loc]; }

    std::int64_t home_row_total(int home) const;
};

enum class ChannelKind {
    Infect,
    Recover,
    Depart,
    Return,
    SleepS,
    SleepI,
    SleepR,
    WakeS,
    WakeI,
    WakeR,
    LatentRecover,
};

struct EventChannel {
    ChannelKind kind;
    int plane = -1;       // compartment the event acts on (Depart/Return move any plane)
    int home = -1;
    int location = -1;
    int destination = -1; // Depart only
    double rate = 0.0;    // per minute
};

/// Largest-remainder rounding of the steady state into the S plane; every
/// home row sums exactly to llround(N_i).
IntegerState integerize_steady_state(const SteadyState& ss);

/// Move llround(eps * N_oo) devices of the origin home cell from S to I.
void seed_integer_infection(IntegerState& s, const SeedSpec& spec,
                            std::vector<std::string>* warnings = nullptr);

/// Move llround(fraction * X) of every compartment to its latent twin.
void move_to_latent(IntegerState& s, double fraction);

/// All reaction channels with nonzero propensity at this state, in the
/// simulator's canonical enumeration order.
std::vector<EventChannel> channel_propensities(const IntegerState& s, const ModelParameters& p);

struct StochasticResult {
    TimeSeries series;
    IntegerState final_state;
    std::uint64_t tau_halvings = 0;
};

/// Fixed-tau leaping over the full channel set. A leap that would drive any
/// compartment negative is rejected and re-run as two half leaps,
/// recursively down to tau_min = 0.001 min (then SimulationError).
class TauLeapSimulator {
public:
    TauLeapSimulator(const ModelParameters& p, const IntegerState& initial);

    /// Advance the state by exactly tau minutes. Returns the number of
    /// halvings that occurred inside this step.
    std::uint64_t step(IntegerState& s, double tau, SplitMix64& rng);

    const ModelParameters& params() const { return *params_; }

private:
    std::uint64_t attempt(IntegerState& s, double tau, SplitMix64& rng, int depth);
    void refresh_infection_force(const IntegerState& s);

    template <class Fn>
    void for_each_channel(const IntegerState& s, Fn&& fn) const;

    const ModelParameters* params_;
    Mat dep_, zr_;
    std::vector<double> lam_coef_, lam_;
    std::vector<double> i_loc_;
    std::vector<std::vector<int>> away_; // per home: visited locations (ascending)
    std::vector<std::int64_t> delta_;
    std::vector<std::size_t> touched_;

    friend std::vector<EventChannel> channel_propensities(const IntegerState&,
                                                          const ModelParameters&);
};

/// Repeated leaps with aggregates sampled on the grid. horizon and
/// sample_every must be multiples of tau (horizon 0 yields only the
/// initial sample). Deterministic given the seed.
StochasticResult simulate(const IntegerState& initial, const ModelParameters& p, double tau,
                          double horizon, double sample_every, std::uint64_t seed);

struct EnsembleResult {
    std::vector<TimeSeries> replicas;
    TimeSeries mean;
    std::array<std::vector<double>, kPlanes> global_std;
    std::vector<std::uint64_t> seeds;
    std::uint64_t tau_halvings = 0;

    std::size_t replica_count() const { return replicas.size(); }
};

/// Replica r runs with seed base_seed + r; replicas are independent and may
/// run on several threads, with results merged in replica order.
EnsembleResult run_ensemble(const IntegerState& initial, const ModelParameters& p, double tau,
                            double horizon, double sample_every, std::size_t n_replicas,
                            std::uint64_t base_seed, unsigned threads = 1);

} // namespace d2dsim
