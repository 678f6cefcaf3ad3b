// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dsim/cdr.hpp"
#include "d2dsim/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace d2dsim::synth {

struct SynthConfig {
    int community_count = 255;
    int total_users = 20000;
    double total_population = 2e6;
    std::int64_t duration_minutes = 150LL * 24 * 60;
    double jump_alpha = 2.51;          // target exponent of the jump-length law
    double attraction_exponent = 1.0;  // Pareto tail of community weights
    double mean_departure_rate = 1.0 / 2880.0; // per minute, at home
    double mean_return_rate = 1.0 / 720.0;     // per minute, away
    double diurnal_amplitude = 0.6;
    std::uint64_t seed = 1;

    // observation process (thinned-call mode)
    bool generate_calls = false;
    double calls_per_day = 8.0;

    double box_km = 600.0;
    std::int64_t occupancy_slot_minutes = 60;
};

struct Community {
    int id = 0;
    std::string name;
    double lat = 0.0, lon = 0.0;
    double area_km2 = 0.0;
    double population = 0.0;
};

struct World {
    std::vector<Community> communities;
    std::vector<double> attraction; // planted weights; populations follow them
    int capital = 0;                // argmax attraction

    std::vector<double> census() const;
    std::vector<double> areas() const;
    std::vector<double> lats() const;
    std::vector<double> lons() const;
};

struct CallEvent {
    int user = 0;
    std::int64_t minute = 0;
    int community = 0;
    double keep_mark = 0.0; // shared uniform, so thinning levels nest
};

/// Everything the closed-loop oracles need: planted parameters, exact
/// expectations, and the event stream the CDR files are emitted from.
struct GroundTruth {
    std::vector<int> homes;               // per user
    std::vector<double> sigma_planted;    // per-community home departure intensity
    double zeta_planted = 0.0;
    Mat kernel;                           // per home row: exact destination law
    CountMat transitions;                 // all true moves [from][to]
    CountMat resident_departures;         // [home][dest]
    CountMat returns;                     // [from][home]
    std::vector<double> t_home;           // resident minutes at home, per community
    Mat t_visit;                          // visitor minutes [location][home]
    Mat expected_nu;                      // conditional expectation of extracted nu
    CountMat occupancy;                   // [slot][community] at slot starts
    std::int64_t occupancy_slot_minutes = 60;
    std::vector<std::vector<Visit>> true_visits; // rounded to minutes, per user
    std::vector<CallEvent> arrival_events;       // unthinned observation
    std::vector<CallEvent> call_events;          // only when generate_calls
};

World generate_world(const SynthConfig& cfg);

GroundTruth generate_corpus(const World& world, const SynthConfig& cfg);

/// CSV bytes of the communities file.
std::string emit_communities_csv(const World& world);

/// CSV bytes of the unthinned CDR (a record at every arrival, including
/// the initial position at t = 0).
std::string emit_cdr(const GroundTruth& gt);

/// CSV bytes of the thinned-call CDR; calls with keep_mark < keep_fraction
/// survive, so smaller fractions give nested subsets.
std::string emit_cdr_thinned(const GroundTruth& gt, double keep_fraction);

/// The TrajectorySet parse_cdr must produce from emit_cdr output;
/// built directly from the generator's own visit log.
TrajectorySet ground_truth_trajectories(const GroundTruth& gt, int community_count,
                                        std::int64_t duration_minutes);

} // namespace d2dsim::synth
