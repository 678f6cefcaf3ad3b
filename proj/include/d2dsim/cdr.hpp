// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dsim/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace d2dsim {

/// One visit to a community: [arrival, departure) in minutes. The last
/// visit of a user departs at the end of the observation window.
struct Visit {
    int community = -1;
    std::int64_t arrival = 0;
    std::int64_t departure = 0;
};

/// Per-user time-ordered community visits parsed from CDR records.
/// Consecutive records in the same community are merged into one visit,
/// so neighbouring visits always differ in community.
struct TrajectorySet {
    std::vector<std::string> user_ids;            // dense index -> external id
    std::vector<std::vector<Visit>> visits;       // per user, time-ordered
    int community_count = 0;
    std::int64_t observation_minutes = 0;

    std::size_t user_count() const { return user_ids.size(); }
    bool operator==(const TrajectorySet&) const = default;
};

/// Aggregated transition tallies. moves(i,j) counts i->j transitions over
/// all users (zero diagonal); returns_home(j,i) counts only j->i
/// transitions whose destination i is the mover's home.
struct TransitionCounts {
    CountMat moves;         // P
    CountMat returns_home;  // P^r, indexed [from j][home i]

    int community_count() const { return static_cast<int>(moves.rows()); }
    std::int64_t total_moves() const;
};

/// nu: row-stochastic destination probabilities (zero diagonal, all-zero
/// row for isolated communities); sigma: departure rates per minute;
/// zeta(j,i): rate of returning home to i from j, per minute.
struct MobilityParameters {
    Mat nu;
    std::vector<double> sigma;
    Mat zeta;
    std::vector<std::uint8_t> isolated; // communities with no observed out-flow

    int community_count() const { return static_cast<int>(nu.rows()); }
};

/// Users per km^2 for each (time slot, community).
struct DensityMatrix {
    Mat rho;                   // |T| x |C|
    std::int64_t slot_minutes = 0;
    std::vector<double> areas; // km^2, strictly positive
};

/// Per-device rates recovered with home bookkeeping. sigma is the
/// departure rate of a resident while at home, zeta(j,i) the return rate
/// of an i-resident while visiting j, and nu rows use resident departures
/// only. These feed the mobility model at the per-device scale the rate
/// equations expect; the plain Eq-style aggregates remain available from
/// compute_sigma/compute_zeta.
struct PerDeviceRates {
    Mat nu;
    std::vector<double> sigma;
    Mat zeta;
    std::vector<std::uint8_t> isolated;
};

/// Parse CDR records ("user_id,timestamp_min,community_id", header
/// required). Records are grouped per user, sorted by timestamp (stable,
/// so equal stamps keep file order), merged, and closed at the window end.
TrajectorySet parse_cdr(std::istream& in, int community_count,
                        std::int64_t observation_minutes);

/// Home = community with the largest total dwell time; ties go to the
/// smallest community index.
std::vector<int> assign_home(const TrajectorySet& t);

TransitionCounts build_transition_counts(const TrajectorySet& t);

/// nu_ij = P_ij / sum_k P_ik; all-zero rows stay zero and flag the
/// community isolated.
MobilityParameters compute_nu(const TransitionCounts& counts);

/// sigma_i = (sum_k P_ik) / time_minutes  [1/min]
std::vector<double> compute_sigma(const TransitionCounts& counts, std::int64_t time_minutes);

/// zeta_ji = P^r_ji / time_minutes  [1/min]
Mat compute_zeta(const TransitionCounts& counts, std::int64_t time_minutes);

/// Convenience: nu + sigma + zeta in one struct.
MobilityParameters extract_mobility(const TransitionCounts& counts, std::int64_t time_minutes);

PerDeviceRates extract_per_device(const TrajectorySet& t);

/// rho_ti = users located in i at the start of slot t, divided by area_i.
DensityMatrix compute_density(const TrajectorySet& t, const std::vector<double>& areas_km2,
                              std::int64_t slot_minutes);

} // namespace d2dsim
