// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace d2dsim::kern {

/// Vector kernels behind the integrator and the RHS evaluations.
///
/// Every kernel has a scalar reference implementation and SIMD variants
/// selected at runtime. The variants are BIT-IDENTICAL by contract, not
/// merely close:
///   - elementwise kernels use plain mul/add per element (no FMA),
///   - reductions accumulate into four lanes (lane = index mod 4, ascending)
///     and combine as (l0 + l1) + (l2 + l3).
/// The equivalence tests assert exact equality on random inputs, which is
/// what keeps results independent of the machine the binary lands on.
struct Ops {
    /// y[i] += a * x[i]
    void (*axpy)(double* y, double a, const double* x, std::size_t n);
    /// y[i] *= a
    void (*scale)(double* y, double a, std::size_t n);
    /// out[i] = a[i] * b[i]
    void (*mul)(double* out, const double* a, const double* b, std::size_t n);
    /// y[i] += a[i] * x[i]
    void (*mul_add)(double* y, const double* a, const double* x, std::size_t n);
    /// y[i] -= a[i] * x[i]
    void (*mul_sub)(double* y, const double* a, const double* x, std::size_t n);
    /// 4-lane dot product
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// 4-lane sum
    double (*sum)(const double* x, std::size_t n);
    /// Mobility flow for one home row:
    ///   out[j] = dep[j] * h - zr[j] * x[j]
    /// and returns sum_j zr[j] * x[j] (4-lane order), i.e. the return flow
    /// feeding the diagonal cell.
    double (*row_flow)(double* out, const double* dep, double h, const double* zr,
                       const double* x, std::size_t n);
    /// y[i] = x0[i] + c1*k1[i] + c2*k2[i] + c3*k3[i] + c4*k4[i]
    void (*rk4_combine)(double* y, const double* x0, const double* k1, const double* k2,
                        const double* k3, const double* k4, double c1, double c2, double c3,
                        double c4, std::size_t n);
    const char* name;
};

const Ops* scalar_ops();
const Ops* avx2_ops(); // nullptr when unsupported by the CPU or the build
const Ops* neon_ops(); // nullptr off aarch64

/// Active kernel set. Defaults to the widest supported variant; the
/// D2DSIM_KERNELS environment variable ("scalar", "avx2", "neon", "auto")
/// overrides before first use.
const Ops& active();
std::string_view active_name();

/// Explicit selection; throws std::invalid_argument for unknown/unsupported.
void select(std::string_view name);

/// All variants runnable on this machine (for equivalence tests).
std::vector<const Ops*> available();

} // namespace d2dsim::kern
