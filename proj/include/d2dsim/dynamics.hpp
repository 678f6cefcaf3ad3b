// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dsim/cdr.hpp"
#include "d2dsim/mobility.hpp"
#include "d2dsim/timeseries.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace d2dsim {

/// Real-valued compartment counts X[plane][home][location], flat layout
/// [(plane*C + home)*C + location]. Latent planes stay identically zero in
/// plain SIR mode.
struct CompartmentState {
    int communities = 0;
    double time = 0.0;
    std::vector<double> x;

    CompartmentState() = default;
    explicit CompartmentState(int c)
        : communities(c), x(static_cast<std::size_t>(kPlanes) * c * c, 0.0) {}

    double* plane_row(int plane, int home)
    {
        return x.data() + (static_cast<std::size_t>(plane) * communities + home) * communities;
    }
    const double* plane_row(int plane, int home) const
    {
        return x.data() + (static_cast<std::size_t>(plane) * communities + home) * communities;
    }
    double& at(int plane, int home, int loc) { return plane_row(plane, home)[loc]; }
    double at(int plane, int home, int loc) const { return plane_row(plane, home)[loc]; }

    /// Total devices with home i, summed over planes and locations.
    double home_row_total(int home) const;
};

/// All rates are per minute and indexed by the community where the device
/// currently is (the location index of its cell).
struct ModelParameters {
    std::vector<double> beta, delta, k_mean;
    std::vector<double> mu_s, mu_i, mu_r;
    std::vector<double> alpha_s, alpha_i, alpha_r;
    std::vector<double> gamma;
    MobilityParameters mobility;
    std::vector<double> n_star_loc; // N_j*, the steady occupancy used in Eq. normalization

    int community_count() const { return static_cast<int>(n_star_loc.size()); }

    /// Zero-filled latent rates (plain SIR mode).
    static ModelParameters sir(std::vector<double> beta, std::vector<double> delta,
                               std::vector<double> k_mean, MobilityParameters mobility,
                               std::vector<double> n_star_loc);
};

/// Sleep/wake rates whose equilibrium latent share equals `fraction`,
/// given the wake rate alpha: mu = alpha * f / (1 - f).
double sleep_rate_for_fraction(double fraction, double wake_rate);

/// Scratch buffers + precomputed coefficient matrices for RHS evaluation.
struct RhsWorkspace {
    explicit RhsWorkspace(const ModelParameters& p);

    Mat dep; // dep(i,j) = sigma_i * nu_ij
    Mat zr;  // zr(i,j)  = zeta(j,i)
    std::vector<double> lam_coef; // beta_j <k_j> / N_j*
    std::vector<double> i_loc, lam, tmp;
};

/// SIR rate equations (3 planes; latent planes must be zero).
void sir_rhs_into(const CompartmentState& s, const ModelParameters& p, RhsWorkspace& ws,
                  std::vector<double>& out);
CompartmentState sir_rhs(const CompartmentState& s, const ModelParameters& p);

/// Six-state system with latent exchanges and the E_I -> R leak.
void sir_latent_rhs_into(const CompartmentState& s, const ModelParameters& p, RhsWorkspace& ws,
                         std::vector<double>& out);
CompartmentState sir_latent_rhs(const CompartmentState& s, const ModelParameters& p);

enum class RhsKind { Sir, SirLatent };

struct IntegrationResult {
    TimeSeries series;
    CompartmentState final_state;
    std::uint64_t clamp_events = 0;
    double clamp_mass = 0.0;
};

/// Classical fixed-step 4th-order integration. Negative undershoots are
/// clamped to zero and the violating home row is renormalized to its
/// initial total; incidents are reported in the result. Non-finite values
/// abort with a diagnostic suggesting a smaller dt.
IntegrationResult integrate(RhsKind kind, const CompartmentState& initial,
                            const ModelParameters& p, double dt, double t_end,
                            double sample_every);

struct SeedSpec {
    int origin_community = 0;
    double epsilon_fraction = 0.0; // fraction of the origin's steady home population
};

/// Everything susceptible at the steady-state partition, with the origin's
/// home cell split S = (1-eps) N_ii*, I = eps N_ii*.
CompartmentState seed_infection(const SteadyState& ss, const SeedSpec& spec, bool latent_mode,
                                std::vector<std::string>* warnings = nullptr);

/// Move `fraction` of every compartment into its latent twin (scenario
/// initialization for latent runs).
void move_to_latent(CompartmentState& s, double fraction);

/// Local basic reproduction number <k> beta / delta.
double r0_local(double k_mean, double beta, double delta);

} // namespace d2dsim
