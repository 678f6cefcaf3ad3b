// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
//
// NEON kernels (aarch64). Two 128-bit accumulators emulate the 4-lane
// layout of the AVX2 variant; explicit mul+add, never vfmaq, to preserve
// the bit-equality contract with the scalar reference.
#include "d2dsim/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace d2dsim::kern {
namespace {

void axpy_neon(double* y, double a, const double* x, std::size_t n)
{
    const std::size_t n2 = n & ~std::size_t(1);
    const float64x2_t va = vdupq_n_f64(a);
    for (std::size_t i = 0; i < n2; i += 2) {
        float64x2_t vy = vld1q_f64(y + i);
        vy = vaddq_f64(vy, vmulq_f64(va, vld1q_f64(x + i)));
        vst1q_f64(y + i, vy);
    }
    for (std::size_t i = n2; i < n; ++i)
        y[i] += a * x[i];
}

void scale_neon(double* y, double a, std::size_t n)
{
    const std::size_t n2 = n & ~std::size_t(1);
    const float64x2_t va = vdupq_n_f64(a);
    for (std::size_t i = 0; i < n2; i += 2)
        vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), va));
    for (std::size_t i = n2; i < n; ++i)
        y[i] *= a;
}

void mul_neon(double* out, const double* a, const double* b, std::size_t n)
{
    const std::size_t n2 = n & ~std::size_t(1);
    for (std::size_t i = 0; i < n2; i += 2)
        vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (std::size_t i = n2; i < n; ++i)
        out[i] = a[i] * b[i];
}

void mul_add_neon(double* y, const double* a, const double* x, std::size_t n)
{
    const std::size_t n2 = n & ~std::size_t(1);
    for (std::size_t i = 0; i < n2; i += 2) {
        float64x2_t vy = vld1q_f64(y + i);
        vy = vaddq_f64(vy, vmulq_f64(vld1q_f64(a + i), vld1q_f64(x + i)));
        vst1q_f64(y + i, vy);
    }
    for (std::size_t i = n2; i < n; ++i)
        y[i] += a[i] * x[i];
}

void mul_sub_neon(double* y, const double* a, const double* x, std::size_t n)
{
    const std::size_t n2 = n & ~std::size_t(1);
    for (std::size_t i = 0; i < n2; i += 2) {
        float64x2_t vy = vld1q_f64(y + i);
        vy = vsubq_f64(vy, vmulq_f64(vld1q_f64(a + i), vld1q_f64(x + i)));
        vst1q_f64(y + i, vy);
    }
    for (std::size_t i = n2; i < n; ++i)
        y[i] -= a[i] * x[i];
}

double dot_neon(const double* a, const double* b, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    float64x2_t acc01 = vdupq_n_f64(0.0), acc23 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n4; i += 4) {
        acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double lane[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1),
                      vgetq_lane_f64(acc23, 0), vgetq_lane_f64(acc23, 1)};
    for (std::size_t i = n4; i < n; ++i)
        lane[i % 4] += a[i] * b[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_neon(const double* x, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    float64x2_t acc01 = vdupq_n_f64(0.0), acc23 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n4; i += 4) {
        acc01 = vaddq_f64(acc01, vld1q_f64(x + i));
        acc23 = vaddq_f64(acc23, vld1q_f64(x + i + 2));
    }
    double lane[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1),
                      vgetq_lane_f64(acc23, 0), vgetq_lane_f64(acc23, 1)};
    for (std::size_t i = n4; i < n; ++i)
        lane[i % 4] += x[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double row_flow_neon(double* out, const double* dep, double h, const double* zr,
                     const double* x, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    const float64x2_t vh = vdupq_n_f64(h);
    float64x2_t acc01 = vdupq_n_f64(0.0), acc23 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n4; i += 4) {
        const float64x2_t r0 = vmulq_f64(vld1q_f64(zr + i), vld1q_f64(x + i));
        const float64x2_t r1 = vmulq_f64(vld1q_f64(zr + i + 2), vld1q_f64(x + i + 2));
        acc01 = vaddq_f64(acc01, r0);
        acc23 = vaddq_f64(acc23, r1);
        vst1q_f64(out + i, vsubq_f64(vmulq_f64(vld1q_f64(dep + i), vh), r0));
        vst1q_f64(out + i + 2, vsubq_f64(vmulq_f64(vld1q_f64(dep + i + 2), vh), r1));
    }
    double lane[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1),
                      vgetq_lane_f64(acc23, 0), vgetq_lane_f64(acc23, 1)};
    for (std::size_t i = n4; i < n; ++i) {
        const double ret = zr[i] * x[i];
        out[i] = dep[i] * h - ret;
        lane[i % 4] += ret;
    }
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void rk4_combine_neon(double* y, const double* x0, const double* k1, const double* k2,
                      const double* k3, const double* k4, double c1, double c2, double c3,
                      double c4, std::size_t n)
{
    const std::size_t n2 = n & ~std::size_t(1);
    const float64x2_t v1 = vdupq_n_f64(c1), v2 = vdupq_n_f64(c2);
    const float64x2_t v3 = vdupq_n_f64(c3), v4 = vdupq_n_f64(c4);
    for (std::size_t i = 0; i < n2; i += 2) {
        float64x2_t acc = vld1q_f64(x0 + i);
        acc = vaddq_f64(acc, vmulq_f64(v1, vld1q_f64(k1 + i)));
        acc = vaddq_f64(acc, vmulq_f64(v2, vld1q_f64(k2 + i)));
        acc = vaddq_f64(acc, vmulq_f64(v3, vld1q_f64(k3 + i)));
        acc = vaddq_f64(acc, vmulq_f64(v4, vld1q_f64(k4 + i)));
        vst1q_f64(y + i, acc);
    }
    for (std::size_t i = n2; i < n; ++i)
        y[i] = x0[i] + c1 * k1[i] + c2 * k2[i] + c3 * k3[i] + c4 * k4[i];
}

const Ops kNeonOps = {
    axpy_neon, scale_neon,  mul_neon,      mul_add_neon,     mul_sub_neon,
    dot_neon,  sum_neon,    row_flow_neon, rk4_combine_neon, "neon",
};

} // namespace

const Ops* neon_ops()
{
    return &kNeonOps;
}

} // namespace d2dsim::kern

#else

namespace d2dsim::kern {
const Ops* neon_ops()
{
    return nullptr;
}
} // namespace d2dsim::kern

#endif
