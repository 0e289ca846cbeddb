// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "rtprune/simd/kernels.hpp"

namespace rtprune::simd::detail {

namespace {

double dot(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return acc;
}

double sum_squares(const float* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = a[i];
        acc += v * v;
    }
    return acc;
}

void axpy(double weight, const float* x, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] = acc[i] + weight * static_cast<double>(x[i]);
    }
}

void sobel_row(const double* above, const double* mid, const double* below, std::size_t width, double* out) {
    for (std::size_t j = 1; j + 1 < width; ++j) {
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

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::Scalar, &dot, &sum_squares, &axpy, &sobel_row};
    return table;
}

}  // namespace rtprune::simd::detail
