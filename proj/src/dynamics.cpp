// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/dynamics.hpp"

#include "d2dsim/error.hpp"
#include "d2dsim/kernels.hpp"

#include <cmath>
#include <cstring>

namespace d2dsim {

double CompartmentState::home_row_total(int home) const
{
    const auto& k = kern::active();
    double total = 0.0;
    for (int s = 0; s < kPlanes; ++s)
        total += k.sum(plane_row(s, home), static_cast<std::size_t>(communities));
    return total;
}

ModelParameters ModelParameters::sir(std::vector<double> beta, std::vector<double> delta,
                                     std::vector<double> k_mean, MobilityParameters mobility,
                                     std::vector<double> n_star_loc)
{
    ModelParameters p;
    const std::size_t C = n_star_loc.size();
    p.beta = std::move(beta);
    p.delta = std::move(delta);
    p.k_mean = std::move(k_mean);
    p.mobility = std::move(mobility);
    p.n_star_loc = std::move(n_star_loc);
    p.mu_s.assign(C, 0.0);
    p.mu_i.assign(C, 0.0);
    p.mu_r.assign(C, 0.0);
    p.alpha_s.assign(C, 0.0);
    p.alpha_i.assign(C, 0.0);
    p.alpha_r.assign(C, 0.0);
    p.gamma.assign(C, 0.0);
    return p;
}

double sleep_rate_for_fraction(double fraction, double wake_rate)
{
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw ValidationError("latent fraction must be in [0, 1)");
    if (!(wake_rate > 0.0))
        throw ValidationError("wake rate must be positive");
    return wake_rate * fraction / (1.0 - fraction);
}

namespace {

void check_dimensions(const ModelParameters& p)
{
    const std::size_t C = p.n_star_loc.size();
    const bool ok = p.beta.size() == C && p.delta.size() == C && p.k_mean.size() == C &&
                    p.mu_s.size() == C && p.mu_i.size() == C && p.mu_r.size() == C &&
                    p.alpha_s.size() == C && p.alpha_i.size() == C && p.alpha_r.size() == C &&
                    p.gamma.size() == C && p.mobility.nu.rows() == C && p.mobility.nu.cols() == C &&
                    p.mobility.zeta.rows() == C && p.mobility.sigma.size() == C;
    if (!ok)
        throw ValidationError("ModelParameters: dimension mismatch");
}

void check_occupancy(const CompartmentState& s, const ModelParameters& p)
{
    const int C = s.communities;
    for (int j = 0; j < C; ++j) {
        if (p.n_star_loc[j] > 0.0)
            continue;
        double occ = 0.0;
        for (int plane = 0; plane < kPlanes; ++plane)
            for (int i = 0; i < C; ++i)
                occ += s.at(plane, i, j);
        if (occ > 0.0)
            throw StructuralError("community " + std::to_string(j) +
                                  " has occupants but zero steady-state population");
    }
}

void check_latent_planes_zero(const CompartmentState& s)
{
    const int C = s.communities;
    const std::size_t offset = static_cast<std::size_t>(PES) * C * C;
    for (std::size_t k = offset; k < s.x.size(); ++k)
        if (s.x[k] != 0.0)
            throw ValidationError("sir_rhs: latent planes must be zero in SIR mode");
}

// Force of infection per location: lam[j] = beta_j <k_j> / N_j* * sum_q I_qj.
// Only the active infective plane enters the sum.
void compute_infection_force(const CompartmentState& s, RhsWorkspace& ws)
{
    const int C = s.communities;
    const auto& k = kern::active();
    std::fill(ws.i_loc.begin(), ws.i_loc.end(), 0.0);
    for (int i = 0; i < C; ++i)
        k.axpy(ws.i_loc.data(), 1.0, s.plane_row(PI, i), static_cast<std::size_t>(C));
    k.mul(ws.lam.data(), ws.lam_coef.data(), ws.i_loc.data(), static_cast<std::size_t>(C));
}

inline void mobility_row(const CompartmentState& s, const ModelParameters& p, RhsWorkspace& ws,
                         double* out, int plane, int home)
{
    const std::size_t C = static_cast<std::size_t>(s.communities);
    const double* row = s.plane_row(plane, home);
    const double at_home = row[home];
    const double returns =
        kern::active().row_flow(out, ws.dep.row(home), at_home, ws.zr.row(home), row, C);
    out[home] = returns - p.mobility.sigma[home] * at_home;
}

} // namespace

RhsWorkspace::RhsWorkspace(const ModelParameters& p)
{
    check_dimensions(p);
    const std::size_t C = p.n_star_loc.size();
    dep = Mat(C, C, 0.0);
    zr = Mat(C, C, 0.0);
    for (std::size_t i = 0; i < C; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
            dep(i, j) = p.mobility.sigma[i] * p.mobility.nu(i, j);
            zr(i, j) = p.mobility.zeta(j, i);
        }
        dep(i, i) = 0.0;
        zr(i, i) = 0.0;
    }
    lam_coef.assign(C, 0.0);
    for (std::size_t j = 0; j < C; ++j)
        if (p.n_star_loc[j] > 0.0)
            lam_coef[j] = p.beta[j] * p.k_mean[j] / p.n_star_loc[j];
    i_loc.assign(C, 0.0);
    lam.assign(C, 0.0);
    tmp.assign(C, 0.0);
}

void sir_rhs_into(const CompartmentState& s, const ModelParameters& p, RhsWorkspace& ws,
                  std::vector<double>& out)
{
    const int C = s.communities;
    const std::size_t n = static_cast<std::size_t>(C);
    out.assign(s.x.size(), 0.0);
    const auto& k = kern::active();

    compute_infection_force(s, ws);

    for (int i = 0; i < C; ++i) {
        double* out_s = out.data() + (static_cast<std::size_t>(PS) * C + i) * C;
        double* out_i = out.data() + (static_cast<std::size_t>(PI) * C + i) * C;
        double* out_r = out.data() + (static_cast<std::size_t>(PR) * C + i) * C;

        mobility_row(s, p, ws, out_s, PS, i);
        mobility_row(s, p, ws, out_i, PI, i);
        mobility_row(s, p, ws, out_r, PR, i);

        // infection: lam_j S_ij leaves S and enters I at the same cell
        k.mul(ws.tmp.data(), ws.lam.data(), s.plane_row(PS, i), n);
        k.axpy(out_s, -1.0, ws.tmp.data(), n);
        k.axpy(out_i, 1.0, ws.tmp.data(), n);

        // recovery: delta_j I_ij
        k.mul_sub(out_i, p.delta.data(), s.plane_row(PI, i), n);
        k.mul_add(out_r, p.delta.data(), s.plane_row(PI, i), n);
    }
    // latent plane derivatives stay zero
}

CompartmentState sir_rhs(const CompartmentState& s, const ModelParameters& p)
{
    check_latent_planes_zero(s);
    check_occupancy(s, p);
    RhsWorkspace ws(p);
    CompartmentState d(s.communities);
    d.time = s.time;
    sir_rhs_into(s, p, ws, d.x);
    return d;
}

void sir_latent_rhs_into(const CompartmentState& s, const ModelParameters& p, RhsWorkspace& ws,
                         std::vector<double>& out)
{
    const int C = s.communities;
    const std::size_t n = static_cast<std::size_t>(C);
    out.assign(s.x.size(), 0.0);
    const auto& k = kern::active();

    compute_infection_force(s, ws);

    for (int i = 0; i < C; ++i) {
        double* out_s = out.data() + (static_cast<std::size_t>(PS) * C + i) * C;
        double* out_i = out.data() + (static_cast<std::size_t>(PI) * C + i) * C;
        double* out_r = out.data() + (static_cast<std::size_t>(PR) * C + i) * C;
        double* out_es = out.data() + (static_cast<std::size_t>(PES) * C + i) * C;
        double* out_ei = out.data() + (static_cast<std::size_t>(PEI) * C + i) * C;
        double* out_er = out.data() + (static_cast<std::size_t>(PER) * C + i) * C;

        // every plane moves with the same sigma nu / zeta pattern
        mobility_row(s, p, ws, out_s, PS, i);
        mobility_row(s, p, ws, out_i, PI, i);
        mobility_row(s, p, ws, out_r, PR, i);
        mobility_row(s, p, ws, out_es, PES, i);
        mobility_row(s, p, ws, out_ei, PEI, i);
        mobility_row(s, p, ws, out_er, PER, i);

        k.mul(ws.tmp.data(), ws.lam.data(), s.plane_row(PS, i), n);
        k.axpy(out_s, -1.0, ws.tmp.data(), n);
        k.axpy(out_i, 1.0, ws.tmp.data(), n);

        k.mul_sub(out_i, p.delta.data(), s.plane_row(PI, i), n);
        k.mul_add(out_r, p.delta.data(), s.plane_row(PI, i), n);

        // sleep / wake exchanges, per plane pair
        k.mul_sub(out_s, p.mu_s.data(), s.plane_row(PS, i), n);
        k.mul_add(out_s, p.alpha_s.data(), s.plane_row(PES, i), n);
        k.mul_add(out_es, p.mu_s.data(), s.plane_row(PS, i), n);
        k.mul_sub(out_es, p.alpha_s.data(), s.plane_row(PES, i), n);

        k.mul_sub(out_i, p.mu_i.data(), s.plane_row(PI, i), n);
        k.mul_add(out_i, p.alpha_i.data(), s.plane_row(PEI, i), n);
        k.mul_add(out_ei, p.mu_i.data(), s.plane_row(PI, i), n);
        k.mul_sub(out_ei, p.alpha_i.data(), s.plane_row(PEI, i), n);

        k.mul_sub(out_r, p.mu_r.data(), s.plane_row(PR, i), n);
        k.mul_add(out_r, p.alpha_r.data(), s.plane_row(PER, i), n);
        k.mul_add(out_er, p.mu_r.data(), s.plane_row(PR, i), n);
        k.mul_sub(out_er, p.alpha_r.data(), s.plane_row(PER, i), n);

        // a latent infective can wake straight into R
        k.mul_add(out_r, p.gamma.data(), s.plane_row(PEI, i), n);
        k.mul_sub(out_ei, p.gamma.data(), s.plane_row(PEI, i), n);
    }
}

CompartmentState sir_latent_rhs(const CompartmentState& s, const ModelParameters& p)
{
    check_occupancy(s, p);
    RhsWorkspace ws(p);
    CompartmentState d(s.communities);
    d.time = s.time;
    sir_latent_rhs_into(s, p, ws, d.x);
    return d;
}

IntegrationResult integrate(RhsKind kind, const CompartmentState& initial,
                            const ModelParameters& p, double dt, double t_end,
                            double sample_every)
{
    if (!(dt > 0.0))
        throw ValidationError("integrate: dt must be positive");
    if (sample_every < dt)
        throw ValidationError("integrate: sample_every must be >= dt");
    const auto near_int = [](double v) { return std::abs(v - std::round(v)) < 1e-9; };
    if (!near_int(sample_every / dt))
        throw ValidationError("integrate: sample_every must be a multiple of dt");
    if (!near_int(t_end / sample_every))
        throw ValidationError("integrate: t_end must be a multiple of sample_every");

    check_dimensions(p);
    check_occupancy(initial, p);
    if (kind == RhsKind::Sir)
        check_latent_planes_zero(initial);

    const int C = initial.communities;
    const std::size_t n = initial.x.size();
    const std::size_t steps_per_sample = static_cast<std::size_t>(std::llround(sample_every / dt));
    const std::size_t total_steps =
        static_cast<std::size_t>(std::llround(t_end / sample_every)) * steps_per_sample;

    RhsWorkspace ws(p);
    const auto& k = kern::active();

    CompartmentState state = initial;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), xtmp(n);
    CompartmentState probe(C); // shares layout; wraps xtmp for rhs evaluation

    std::vector<double> row_target(C);
    for (int i = 0; i < C; ++i)
        row_target[i] = initial.home_row_total(i);

    IntegrationResult result;
    result.series.reserve_samples(total_steps / steps_per_sample + 1, C);

    Mat loc(kPlanes, static_cast<std::size_t>(C), 0.0);
    const auto sample = [&](double t) {
        for (int s = 0; s < kPlanes; ++s) {
            std::memset(loc.row(s), 0, sizeof(double) * C);
            for (int i = 0; i < C; ++i)
                k.axpy(loc.row(s), 1.0, state.plane_row(s, i), static_cast<std::size_t>(C));
        }
        result.series.push_sample(t, {loc.row(0), loc.row(1), loc.row(2), loc.row(3), loc.row(4),
                                      loc.row(5)});
    };

    const auto eval = [&](std::vector<double>& at, std::vector<double>& out) {
        std::swap(probe.x, at); // borrow the buffer; rhs only reads
        if (kind == RhsKind::Sir)
            sir_rhs_into(probe, p, ws, out);
        else
            sir_latent_rhs_into(probe, p, ws, out);
        std::swap(probe.x, at);
    };

    sample(state.time);

    for (std::size_t step = 0; step < total_steps; ++step) {
        eval(state.x, k1);
        k.rk4_combine(xtmp.data(), state.x.data(), k1.data(), k1.data(), k1.data(), k1.data(),
                      dt / 2.0, 0.0, 0.0, 0.0, n);
        eval(xtmp, k2);
        k.rk4_combine(xtmp.data(), state.x.data(), k2.data(), k2.data(), k2.data(), k2.data(),
                      dt / 2.0, 0.0, 0.0, 0.0, n);
        eval(xtmp, k3);
        k.rk4_combine(xtmp.data(), state.x.data(), k3.data(), k3.data(), k3.data(), k3.data(),
                      dt, 0.0, 0.0, 0.0, n);
        eval(xtmp, k4);
        k.rk4_combine(state.x.data(), state.x.data(), k1.data(), k2.data(), k3.data(), k4.data(),
                      dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0, n);
        state.time += dt;

        // clamp undershoots, renormalize the violating home rows
        for (int i = 0; i < C; ++i) {
            bool violated = false;
            for (int s = 0; s < kPlanes; ++s) {
                double* row = state.plane_row(s, i);
                for (int j = 0; j < C; ++j) {
                    const double v = row[j];
                    if (!(v >= 0.0)) {
                        if (!std::isfinite(v))
                            throw SimulationError(
                                "integrate: non-finite state at t = " + std::to_string(state.time) +
                                " (home " + std::to_string(i) + "); try a smaller dt");
                        result.clamp_mass += -v;
                        ++result.clamp_events;
                        row[j] = 0.0;
                        violated = true;
                    } else if (std::isinf(v)) {
                        throw SimulationError(
                            "integrate: non-finite state at t = " + std::to_string(state.time) +
                            "; try a smaller dt");
                    }
                }
            }
            if (violated && row_target[i] > 0.0) {
                const double current = state.home_row_total(i);
                if (current > 0.0) {
                    const double scalef = row_target[i] / current;
                    for (int s = 0; s < kPlanes; ++s)
                        k.scale(state.plane_row(s, i), scalef, static_cast<std::size_t>(C));
                }
            }
        }

        if ((step + 1) % steps_per_sample == 0)
            sample(state.time);
    }

    result.final_state = std::move(state);
    return result;
}

CompartmentState seed_infection(const SteadyState& ss, const SeedSpec& spec, bool latent_mode,
                                std::vector<std::string>* warnings)
{
    (void)latent_mode; // latent planes start empty either way
    const int C = static_cast<int>(ss.n_star.rows());
    if (spec.origin_community < 0 || spec.origin_community >= C)
        throw ValidationError("seed_infection: origin community out of range");
    if (!(spec.epsilon_fraction > 0.0 && spec.epsilon_fraction < 1.0))
        throw ValidationError("seed_infection: epsilon must satisfy 0 < eps < 1");

    CompartmentState s(C);
    for (int i = 0; i < C; ++i)
        std::memcpy(s.plane_row(PS, i), ss.n_star.row(i), sizeof(double) * C);

    const int o = spec.origin_community;
    const double home_pop = ss.n_star(o, o);
    const double seeded = spec.epsilon_fraction * home_pop;
    if (seeded < 1.0 && warnings)
        warnings->push_back("seed_infection: seeded mass " + std::to_string(seeded) +
                            " is below one device");
    s.at(PS, o, o) = home_pop - seeded;
    s.at(PI, o, o) = seeded;
    return s;
}

void move_to_latent(CompartmentState& s, double fraction)
{
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw ValidationError("move_to_latent: fraction must be in [0, 1)");
    if (fraction == 0.0)
        return;
    const int C = s.communities;
    constexpr int pairs[3][2] = {{PS, PES}, {PI, PEI}, {PR, PER}};
    for (auto [active, latent] : pairs) {
        for (int i = 0; i < C; ++i) {
            double* a = s.plane_row(active, i);
            double* l = s.plane_row(latent, i);
            for (int j = 0; j < C; ++j) {
                const double moved = fraction * a[j];
                a[j] -= moved;
                l[j] += moved;
            }
        }
    }
}

double r0_local(double k_mean, double beta, double delta)
{
    if (!(delta > 0.0))
        throw ValidationError("r0_local: delta must be positive (threshold undefined)");
    return k_mean * beta / delta;
}

} // namespace d2dsim
