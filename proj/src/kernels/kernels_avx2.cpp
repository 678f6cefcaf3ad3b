// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2 kernels. Deliberately no FMA: fused rounding would diverge from the
// scalar reference. Reductions keep lane = index mod 4 and combine as
// (l0 + l1) + (l2 + l3), matching kernels_scalar.cpp bit for bit.
#include "d2dsim/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace d2dsim::kern {
namespace {

inline double combine_lanes(__m256d acc, const double* a, const double* b, std::size_t n4,
                            std::size_t n)
{
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (std::size_t i = n4; i < n; ++i)
        lane[i % 4] += a[i] * b[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    const __m256d va = _mm256_set1_pd(a);
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (std::size_t i = n4; i < n; ++i)
        y[i] += a * x[i];
}

void scale_avx2(double* y, double a, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    const __m256d va = _mm256_set1_pd(a);
    for (std::size_t i = 0; i < n4; i += 4)
        _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), va));
    for (std::size_t i = n4; i < n; ++i)
        y[i] *= a;
}

void mul_avx2(double* out, const double* a, const double* b, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (std::size_t i = n4; i < n; ++i)
        out[i] = a[i] * b[i];
}

void mul_add_avx2(double* y, const double* a, const double* x, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (std::size_t i = n4; i < n; ++i)
        y[i] += a[i] * x[i];
}

void mul_sub_avx2(double* y, const double* a, const double* x, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_sub_pd(vy, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (std::size_t i = n4; i < n; ++i)
        y[i] -= a[i] * x[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    return combine_lanes(acc, a, b, n4, n);
}

double sum_avx2(const double* x, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (std::size_t i = n4; i < n; ++i)
        lane[i % 4] += x[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double row_flow_avx2(double* out, const double* dep, double h, const double* zr,
                     const double* x, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    const __m256d vh = _mm256_set1_pd(h);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d ret = _mm256_mul_pd(_mm256_loadu_pd(zr + i), _mm256_loadu_pd(x + i));
        acc = _mm256_add_pd(acc, ret);
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(dep + i), vh), ret));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (std::size_t i = n4; i < n; ++i) {
        const double ret = zr[i] * x[i];
        out[i] = dep[i] * h - ret;
        lane[i % 4] += ret;
    }
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void rk4_combine_avx2(double* y, const double* x0, const double* k1, const double* k2,
                      const double* k3, const double* k4, double c1, double c2, double c3,
                      double c4, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t(3);
    const __m256d v1 = _mm256_set1_pd(c1), v2 = _mm256_set1_pd(c2);
    const __m256d v3 = _mm256_set1_pd(c3), v4 = _mm256_set1_pd(c4);
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d acc = _mm256_loadu_pd(x0 + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v1, _mm256_loadu_pd(k1 + i)));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v2, _mm256_loadu_pd(k2 + i)));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v3, _mm256_loadu_pd(k3 + i)));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v4, _mm256_loadu_pd(k4 + i)));
        _mm256_storeu_pd(y + i, acc);
    }
    for (std::size_t i = n4; i < n; ++i)
        y[i] = x0[i] + c1 * k1[i] + c2 * k2[i] + c3 * k3[i] + c4 * k4[i];
}

const Ops kAvx2Ops = {
    axpy_avx2, scale_avx2,  mul_avx2,      mul_add_avx2,     mul_sub_avx2,
    dot_avx2,  sum_avx2,    row_flow_avx2, rk4_combine_avx2, "avx2",
};

} // namespace

const Ops* avx2_ops()
{
    return __builtin_cpu_supports("avx2") ? &kAvx2Ops : nullptr;
}

} // namespace d2dsim::kern

#else

namespace d2dsim::kern {
const Ops* avx2_ops()
{
    return nullptr;
}
} // namespace d2dsim::kern

#endif
