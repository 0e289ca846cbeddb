// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Inner-loop kernels with a scalar reference implementation and
// vectorized variants picked at runtime from the host CPU.
//
// Every variant of `axpy` and `sobel_row` performs the same operations in
// the same order as the scalar reference, so their results are bit-identical.
// `dot` and `sum_squares` reorder the reduction and may differ from the
// reference in the last few ulps.

#include <cstddef>
#include <string_view>
#include <vector>

namespace rtprune::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
    Isa isa;
    /// sum_i a[i] * b[i], accumulated in double.
    double (*dot)(const float* a, const float* b, std::size_t n);
    /// sum_i a[i]^2, accumulated in double.
    double (*sum_squares)(const float* a, std::size_t n);
    /// acc[i] += weight * x[i]
    void (*axpy)(double weight, const float* x, double* acc, std::size_t n);
    /// 3x3 Sobel gradient magnitude for columns 1..width-2 of the middle row.
    /// out[0] and out[width-1] are left untouched.
    void (*sobel_row)(const double* above, const double* mid, const double* below, std::size_t width, double* out);
};

std::string_view name(Isa isa);

bool supported(Isa isa);

std::vector<Isa> supported_isas();

/// Kernel table for a specific ISA; throws InvalidInput if the host lacks it.
const KernelTable& kernels(Isa isa);

/// Active kernel table. RTPRUNE_SIMD=scalar|avx2|neon forces a choice
/// (falling back to scalar when unsupported); otherwise the widest supported ISA.
const KernelTable& kernels();

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();  // nullptr when not compiled in
}  // namespace detail

}  // namespace rtprune::simd
