// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/mobility.hpp"

#include "d2dsim/error.hpp"
#include "d2dsim/kernels.hpp"

#include <cmath>
#include <numbers>

namespace d2dsim {

Mat mobility_rhs(const Mat& n, const MobilityParameters& m)
{
    const std::size_t C = n.rows();
    if (n.cols() != C || m.nu.rows() != C || m.zeta.rows() != C || m.sigma.size() != C)
        throw ValidationError("mobility_rhs: dimension mismatch");

    const auto& k = kern::active();
    Mat deriv(C, C, 0.0);
    std::vector<double> dep(C), zr(C);
    for (std::size_t i = 0; i < C; ++i) {
        const double sigma_i = m.sigma[i];
        for (std::size_t j = 0; j < C; ++j) {
            dep[j] = sigma_i * m.nu(i, j);
            zr[j] = m.zeta(j, i);
        }
        dep[i] = 0.0;
        zr[i] = 0.0;
        const double home = n(i, i);
        // off-diagonal: sigma_i nu_ij N_ii - zeta_ji N_ij; the returned sum
        // is the total return flow into the home cell.
        const double returns = k.row_flow(deriv.row(i), dep.data(), home, zr.data(), n.row(i), C);
        deriv(i, i) = returns - sigma_i * home;
    }
    return deriv;
}

SteadyState steady_state(const std::vector<double>& census, const std::vector<double>& areas_km2,
                         const MobilityParameters& m)
{
    const std::size_t C = m.nu.rows();
    if (census.size() != C || areas_km2.size() != C)
        throw ValidationError("steady_state: dimension mismatch");
    for (double a : areas_km2)
        if (!(a > 0.0))
            throw ValidationError("steady_state: areas must be strictly positive");

    SteadyState ss;
    ss.n_star = Mat(C, C, 0.0);
    for (std::size_t i = 0; i < C; ++i) {
        const double sigma_i = m.sigma[i];
        if (sigma_i == 0.0) {
            ss.n_star(i, i) = census[i]; // the whole home population stays put
            continue;
        }
        double ratio_sum = 0.0;
        for (std::size_t k = 0; k < C; ++k) {
            if (k == i || m.nu(i, k) == 0.0)
                continue;
            const double zeta_ki = m.zeta(k, i);
            if (zeta_ki == 0.0)
                throw StructuralError("steady_state: no return path for home " +
                                      std::to_string(i) + " from community " + std::to_string(k) +
                                      " (nu > 0 with zeta = 0)");
            ratio_sum += m.nu(i, k) / zeta_ki;
        }
        const double denom = 1.0 + sigma_i * ratio_sum;
        const double home = census[i] / denom;
        ss.n_star(i, i) = home;
        for (std::size_t j = 0; j < C; ++j) {
            if (j == i || m.nu(i, j) == 0.0)
                continue;
            ss.n_star(i, j) = census[i] * sigma_i * m.nu(i, j) / (m.zeta(j, i) * denom);
        }
    }

    ss.n_loc.assign(C, 0.0);
    const auto& k = kern::active();
    for (std::size_t i = 0; i < C; ++i)
        k.axpy(ss.n_loc.data(), 1.0, ss.n_star.row(i), C);
    ss.rho_star.resize(C);
    for (std::size_t j = 0; j < C; ++j)
        ss.rho_star[j] = ss.n_loc[j] / areas_km2[j];
    return ss;
}

Mat heterogeneous_zeta(const TransitionCounts& counts, double zeta_bar, double chi,
                       std::vector<std::string>* warnings)
{
    if (!(zeta_bar > 0.0))
        throw ValidationError("heterogeneous_zeta: zeta_bar must be positive");
    if (chi >= 0.0 && warnings)
        warnings->push_back("heterogeneous_zeta: chi = " + std::to_string(chi) +
                            " is outside the motivated range (chi < 0)");

    const int C = counts.community_count();
    std::vector<double> degree(C, 0.0);
    for (int i = 0; i < C; ++i) {
        int d = 0;
        for (int j = 0; j < C; ++j)
            if (j != i && counts.moves(i, j) > 0)
                ++d;
        degree[i] = static_cast<double>(d);
    }

    double mean_dchi = 0.0;
    int connected = 0;
    for (int i = 0; i < C; ++i) {
        if (degree[i] > 0.0) {
            mean_dchi += std::pow(degree[i], chi);
            ++connected;
        }
    }
    if (connected > 0)
        mean_dchi /= static_cast<double>(connected);

    Mat zeta(C, C, 0.0);
    for (int home = 0; home < C; ++home) {
        const double rate = degree[home] > 0.0
                                ? zeta_bar * mean_dchi / std::pow(degree[home], chi)
                                : zeta_bar;
        for (int from = 0; from < C; ++from)
            if (from != home)
                zeta(from, home) = rate;
    }
    return zeta;
}

std::vector<double> neighborhood_size(const SteadyState& ss, double radius_m)
{
    if (!(radius_m > 0.0))
        throw ValidationError("neighborhood_size: radius must be positive");
    const double r_km = radius_m / 1000.0;
    const double area = std::numbers::pi * r_km * r_km;
    std::vector<double> k(ss.rho_star.size());
    for (std::size_t i = 0; i < k.size(); ++i)
        k[i] = ss.rho_star[i] * area;
    return k;
}

std::vector<double> beta_from_contact(const std::vector<double>& c)
{
    std::vector<double> beta(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!(c[i] >= 0.0))
            throw ValidationError("beta_from_contact: c must be >= 0");
        if (c[i] >= 1.0)
            throw ValidationError("beta_from_contact: c = 1 gives an infinite rate");
        beta[i] = -std::log1p(-c[i]);
    }
    return beta;
}

std::size_t clean_no_return(MobilityParameters& m)
{
    const std::size_t C = m.nu.rows();
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < C; ++i) {
        double kept = 0.0;
        for (std::size_t j = 0; j < C; ++j) {
            if (m.nu(i, j) == 0.0)
                continue;
            if (m.zeta(j, i) == 0.0) {
                m.nu(i, j) = 0.0;
                ++dropped;
            } else {
                kept += m.nu(i, j);
            }
        }
        if (m.isolated.size() == C && m.isolated[i])
            continue;
        if (kept == 0.0) {
            if (m.isolated.size() == C)
                m.isolated[i] = 1;
            m.sigma[i] = 0.0;
        } else {
            const double inv = 1.0 / kept;
            for (std::size_t j = 0; j < C; ++j)
                m.nu(i, j) *= inv;
        }
    }
    return dropped;
}

} // namespace d2dsim
