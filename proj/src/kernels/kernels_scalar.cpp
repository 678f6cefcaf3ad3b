// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. The 4-lane accumulation mirrors the SIMD register
// layout exactly (lane = index mod 4), so reductions here are bit-identical
// to the vector variants.
#include "d2dsim/kernels.hpp"

namespace d2dsim::kern {
namespace {

void axpy_scalar(double* y, double a, const double* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

void scale_scalar(double* y, double a, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] *= a;
}

void mul_scalar(double* out, const double* a, const double* b, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] * b[i];
}

void mul_add_scalar(double* y, const double* a, const double* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a[i] * x[i];
}

void mul_sub_scalar(double* y, const double* a, const double* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] -= a[i] * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n)
{
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
        lane[i % 4] += a[i] * b[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_scalar(const double* x, std::size_t n)
{
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
        lane[i % 4] += x[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double row_flow_scalar(double* out, const double* dep, double h, const double* zr,
                       const double* x, std::size_t n)
{
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double ret = zr[i] * x[i];
        out[i] = dep[i] * h - ret;
        lane[i % 4] += ret;
    }
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void rk4_combine_scalar(double* y, const double* x0, const double* k1, const double* k2,
                        const double* k3, const double* k4, double c1, double c2, double c3,
                        double c4, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] = x0[i] + c1 * k1[i] + c2 * k2[i] + c3 * k3[i] + c4 * k4[i];
}

const Ops kScalarOps = {
    axpy_scalar,  scale_scalar,    mul_scalar, mul_add_scalar,     mul_sub_scalar,
    dot_scalar,   sum_scalar,      row_flow_scalar, rk4_combine_scalar, "scalar",
};

} // namespace

const Ops* scalar_ops()
{
    return &kScalarOps;
}

} // namespace d2dsim::kern
