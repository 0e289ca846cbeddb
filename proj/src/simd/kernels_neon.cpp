// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace rtprune::simd::detail {

namespace {

double dot(const float* a, const float* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t va = vld1q_f32(a + i);
        const float32x4_t vb = vld1q_f32(b + i);
        acc0 = vfmaq_f64(acc0, vcvt_f64_f32(vget_low_f32(va)), vcvt_f64_f32(vget_low_f32(vb)));
        acc1 = vfmaq_f64(acc1, vcvt_high_f64_f32(va), vcvt_high_f64_f32(vb));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return acc;
}

double sum_squares(const float* a, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t va = vld1q_f32(a + i);
        const float64x2_t lo = vcvt_f64_f32(vget_low_f32(va));
        const float64x2_t hi = vcvt_high_f64_f32(va);
        acc0 = vfmaq_f64(acc0, lo, lo);
        acc1 = vfmaq_f64(acc1, hi, hi);
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        const double v = a[i];
        acc += v * v;
    }
    return acc;
}

void axpy(double weight, const float* x, double* acc, std::size_t n) {
    const float64x2_t w = vdupq_n_f64(weight);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vx = vcvt_f64_f32(vld1_f32(x + i));
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vmulq_f64(w, vx)));
    }
    for (; i < n; ++i) {
        acc[i] = acc[i] + weight * static_cast<double>(x[i]);
    }
}

void sobel_row(const double* above, const double* mid, const double* below, std::size_t width, double* out) {
    const float64x2_t two = vdupq_n_f64(2.0);
    std::size_t j = 1;
    for (; j + 2 < width; j += 2) {
        const float64x2_t a_l = vld1q_f64(above + j - 1);
        const float64x2_t a_c = vld1q_f64(above + j);
        const float64x2_t a_r = vld1q_f64(above + j + 1);
        const float64x2_t m_l = vld1q_f64(mid + j - 1);
        const float64x2_t m_r = vld1q_f64(mid + j + 1);
        const float64x2_t b_l = vld1q_f64(below + j - 1);
        const float64x2_t b_c = vld1q_f64(below + j);
        const float64x2_t b_r = vld1q_f64(below + j + 1);

        const float64x2_t right = vaddq_f64(vaddq_f64(a_r, vmulq_f64(two, m_r)), b_r);
        const float64x2_t left = vaddq_f64(vaddq_f64(a_l, vmulq_f64(two, m_l)), b_l);
        const float64x2_t top = vaddq_f64(vaddq_f64(a_l, vmulq_f64(two, a_c)), a_r);
        const float64x2_t bottom = vaddq_f64(vaddq_f64(b_l, vmulq_f64(two, b_c)), b_r);
        const float64x2_t gx = vsubq_f64(right, left);
        const float64x2_t gy = vsubq_f64(top, bottom);
        vst1q_f64(out + j, vsqrtq_f64(vaddq_f64(vmulq_f64(gx, gx), vmulq_f64(gy, gy))));
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

const KernelTable* neon_table() {
    static const KernelTable table{Isa::Neon, &dot, &sum_squares, &axpy, &sobel_row};
    return &table;
}

}  // namespace rtprune::simd::detail

#else

namespace rtprune::simd::detail {
const KernelTable* neon_table() {
    return nullptr;
}
}  // namespace rtprune::simd::detail

#endif
