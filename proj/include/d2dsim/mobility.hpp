// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dsim/cdr.hpp"
#include "d2dsim/grid.hpp"

#include <string>
#include <vector>

namespace d2dsim {

/// Device counts split by home: n(i,j) = devices with home i currently in j.
struct PopulationPartition {
    Mat n;
    std::vector<double> areas;  // km^2
    std::vector<double> census; // N_i
};

struct SteadyState {
    Mat n_star;                    // |C|x|C|, home-row sums preserved
    std::vector<double> n_loc;     // occupancy per location, N_j*
    std::vector<double> rho_star;  // devices per km^2 at steady state
};

struct ContactParameters {
    std::vector<double> k_mean; // expected neighbours per device
    std::vector<double> beta;   // 1/min
    double radius_m = 0.0;
};

/// Rate of change of the home/location partition:
///   dN_ii/dt = sum_{j!=i} zeta_ji N_ij - sigma_i N_ii
///   dN_ij/dt = sigma_i nu_ij N_ii - zeta_ji N_ij
Mat mobility_rhs(const Mat& n, const MobilityParameters& m);

/// Closed-form long-run partition:
///   N_ii* = N_i / (1 + sigma_i sum_k nu_ik / zeta_ki)
///   N_ij* = N_i sigma_i nu_ij / (zeta_ji (1 + sigma_i sum_k nu_ik / zeta_ki))
/// Throws StructuralError where nu_ij > 0 with zeta_ji = 0 (no return path).
SteadyState steady_state(const std::vector<double>& census, const std::vector<double>& areas_km2,
                         const MobilityParameters& m);

/// Degree-dependent return rates: zeta[from i][home j] = zeta_bar <d^chi> / d_j^chi,
/// with d the out-degree of the transition graph's unweighted support and
/// <d^chi> averaged over communities with d > 0. Isolated communities get
/// zeta_bar. chi >= 0 is accepted but flagged via `warnings`.
Mat heterogeneous_zeta(const TransitionCounts& counts, double zeta_bar, double chi,
                       std::vector<std::string>* warnings = nullptr);

/// <k_i> = rho_i* pi r^2 (r in metres, densities per km^2).
std::vector<double> neighborhood_size(const SteadyState& ss, double radius_m);

/// beta_i = -ln(1 - c_i) for contact success probabilities c_i in [0, 1).
std::vector<double> beta_from_contact(const std::vector<double>& c);

/// Drop nu entries that have no return support (zeta_ji = 0) and
/// renormalize the affected rows. Returns the number of dropped entries;
/// rows losing all mass are flagged isolated with sigma set to 0.
std::size_t clean_no_return(MobilityParameters& m);

} // namespace d2dsim
