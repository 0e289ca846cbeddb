// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.

#include "rtprune/simd/kernels.hpp"

#if defined(RTPRUNE_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace rtprune::simd::detail {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

double dot(const float* a, const float* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256 vb = _mm256_loadu_ps(b + i);
        const __m256d a0 = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
        const __m256d a1 = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
        const __m256d b0 = _mm256_cvtps_pd(_mm256_castps256_ps128(vb));
        const __m256d b1 = _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1));
        acc0 = _mm256_fmadd_pd(a0, b0, acc0);
        acc1 = _mm256_fmadd_pd(a1, b1, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return acc;
}

double sum_squares(const float* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256d a0 = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
        const __m256d a1 = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
        acc0 = _mm256_fmadd_pd(a0, a0, acc0);
        acc1 = _mm256_fmadd_pd(a1, a1, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double v = a[i];
        acc += v * v;
    }
    return acc;
}

// mul then add, never fused: must match the scalar reference bit for bit.
void axpy(double weight, const float* x, double* acc, std::size_t n) {
    const __m256d w = _mm256_set1_pd(weight);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        const __m256d va = _mm256_loadu_pd(acc + i);
        _mm256_storeu_pd(acc + i, _mm256_add_pd(va, _mm256_mul_pd(w, vx)));
    }
    for (; i < n; ++i) {
        acc[i] = acc[i] + weight * static_cast<double>(x[i]);
    }
}

void sobel_row(const double* above, const double* mid, const double* below, std::size_t width, double* out) {
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t j = 1;
    for (; j + 4 < width; j += 4) {
        const __m256d a_l = _mm256_loadu_pd(above + j - 1);
        const __m256d a_c = _mm256_loadu_pd(above + j);
        const __m256d a_r = _mm256_loadu_pd(above + j + 1);
        const __m256d m_l = _mm256_loadu_pd(mid + j - 1);
        const __m256d m_r = _mm256_loadu_pd(mid + j + 1);
        const __m256d b_l = _mm256_loadu_pd(below + j - 1);
        const __m256d b_c = _mm256_loadu_pd(below + j);
        const __m256d b_r = _mm256_loadu_pd(below + j + 1);

        const __m256d right = _mm256_add_pd(_mm256_add_pd(a_r, _mm256_mul_pd(two, m_r)), b_r);
        const __m256d left = _mm256_add_pd(_mm256_add_pd(a_l, _mm256_mul_pd(two, m_l)), b_l);
        const __m256d top = _mm256_add_pd(_mm256_add_pd(a_l, _mm256_mul_pd(two, a_c)), a_r);
        const __m256d bottom = _mm256_add_pd(_mm256_add_pd(b_l, _mm256_mul_pd(two, b_c)), b_r);
        const __m256d gx = _mm256_sub_pd(right, left);
        const __m256d gy = _mm256_sub_pd(top, bottom);
        const __m256d mag = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(gx, gx), _mm256_mul_pd(gy, gy)));
        _mm256_storeu_pd(out + j, mag);
    }
    for (; j + 1 < width; ++j) {
        const double right = above[j + 1] + 2.0 * mid[j + 1] + below[j + 1];
        const double left = above[j - 1] + 2.0 * mid[j - 1] + below[j - 1];
        const double top = above[j - 1] + 2.0 * above[j] + above[j + 1];
        const double bottom = below[j - 1] + 2.0 * below[j] + below[j + 1];
        const double gx = right - left;
        const double gy = top - bottom;
        out[j] = std::sqrt(gx * gx + gy * gy);
    }
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{Isa::Avx2, &dot, &sum_squares, &axpy, &sobel_row};
    return &table;
}

}  // namespace rtprune::simd::detail

#else

namespace rtprune::simd::detail {
const KernelTable* avx2_table() {
    return nullptr;
}
}  // namespace rtprune::simd::detail

#endif
