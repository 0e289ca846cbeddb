// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rtprune/matrix.hpp"
#include "rtprune/simd/kernels.hpp"

namespace rtprune::tokens {

/// Partition of token indices into the kept (dominant) set and the
/// proposed-to-prune set. Both index lists are ascending.
struct SelectionResult {
    std::vector<std::size_t> kept_indices;
    std::vector<std::size_t> pruned_indices;
    std::vector<double> norms;  ///< l2-norm of every token, length N
    std::size_t kept_count = 0;
    double ratio = 0.0;  ///< pruning ratio the selection was made with
};

struct Similarity {
    double value = 0.0;
    bool degenerate = false;  ///< one of the rows was the zero vector; value is 0
};

std::vector<double> token_norms(const TokenMatrix& tokens);
std::vector<double> token_norms(const TokenMatrix& tokens, const simd::KernelTable& kernels);

/// Cosine of the angle between two rows, clamped to [-1, 1].
/// A zero row yields {0, degenerate = true}.
Similarity cosine_similarity(std::span<const float> a, std::span<const float> b);

/// Mean cosine similarity over all N(N-1)/2 unordered token pairs.
/// Requires N >= 2.
double mean_pairwise_similarity(const TokenMatrix& tokens);

/// clamp(round(n * (1 - ratio)), 1, n). Requires 0 <= ratio < 1.
std::size_t kept_count(std::size_t n, double ratio);

/// Indices of the k largest values (ties toward the lower index), in rank order.
std::vector<std::size_t> top_k_indices(std::span<const double> values, std::size_t k);

/// Keeps the kept_count(N, ratio) tokens with the largest l2-norms.
SelectionResult select_dominant(const TokenMatrix& tokens, double ratio);

}  // namespace rtprune::tokens
