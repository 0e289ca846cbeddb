// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/tokens.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rtprune/parallel.hpp"

namespace rtprune::tokens {

namespace {

void check_ratio(double ratio) {
    check(std::isfinite(ratio) && ratio >= 0.0 && ratio < 1.0, ErrorCode::InvalidInput,
          "pruning ratio must lie in [0, 1)");
}

double clamp_unit(double v) {
    return std::clamp(v, -1.0, 1.0);
}

}  // namespace

std::vector<double> token_norms(const TokenMatrix& tokens) {
    return token_norms(tokens, simd::kernels());
}

std::vector<double> token_norms(const TokenMatrix& tokens, const simd::KernelTable& kernels) {
    std::vector<double> norms(tokens.count());
    parallel_for(tokens.count(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const auto row = tokens.row(k);
            norms[k] = std::sqrt(kernels.sum_squares(row.data(), row.size()));
        }
    });
    return norms;
}

Similarity cosine_similarity(std::span<const float> a, std::span<const float> b) {
    check(a.size() == b.size(), ErrorCode::InvalidInput, "cosine_similarity: rows differ in length");
    const auto finite = [](float v) { return std::isfinite(v); };
    check(std::all_of(a.begin(), a.end(), finite) && std::all_of(b.begin(), b.end(), finite),
          ErrorCode::InvalidInput, "cosine_similarity: non-finite entry");

    const auto& k = simd::kernels();
    const double ss_a = k.sum_squares(a.data(), a.size());
    const double ss_b = k.sum_squares(b.data(), b.size());
    if (ss_a == 0.0 || ss_b == 0.0) {
        return {0.0, true};
    }
    const double dot = k.dot(a.data(), b.data(), a.size());
    return {clamp_unit(dot / std::sqrt(ss_a * ss_b)), false};
}

double mean_pairwise_similarity(const TokenMatrix& tokens) {
    const std::size_t n = tokens.count();
    check(n >= 2, ErrorCode::InvalidInput, "mean_pairwise_similarity needs at least two tokens");

    const auto& k = simd::kernels();
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = k.sum_squares(tokens.row(i).data(), tokens.dim());
    }

    // Row i accumulates its pairs (i, j > i); rows are summed in index order afterwards.
    std::vector<double> partial(n, 0.0);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            if (sq[i] == 0.0) {
                continue;
            }
            double acc = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (sq[j] == 0.0) {
                    continue;
                }
                const double dot = k.dot(tokens.row(i).data(), tokens.row(j).data(), tokens.dim());
                acc += clamp_unit(dot / std::sqrt(sq[i] * sq[j]));
            }
            partial[i] = acc;
        }
    }, 4);

    const double total = std::accumulate(partial.begin(), partial.end(), 0.0);
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return clamp_unit(total / pairs);
}

std::size_t kept_count(std::size_t n, double ratio) {
    check_ratio(ratio);
    const double target = std::round(static_cast<double>(n) * (1.0 - ratio));
    return std::clamp<std::size_t>(static_cast<std::size_t>(target), 1, std::max<std::size_t>(n, 1));
}

std::vector<std::size_t> top_k_indices(std::span<const double> values, std::size_t k) {
    check(k <= values.size(), ErrorCode::InvalidInput, "top_k_indices: k exceeds the number of values");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto ranks_before = [&](std::size_t a, std::size_t b) {
        return values[a] > values[b] || (values[a] == values[b] && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), ranks_before);
    order.resize(k);
    return order;
}

SelectionResult select_dominant(const TokenMatrix& tokens, double ratio) {
    check_ratio(ratio);
    SelectionResult result;
    result.ratio = ratio;
    result.norms = token_norms(tokens);
    result.kept_count = kept_count(tokens.count(), ratio);

    result.kept_indices = top_k_indices(result.norms, result.kept_count);
    std::sort(result.kept_indices.begin(), result.kept_indices.end());

    std::vector<bool> kept(tokens.count(), false);
    for (const auto idx : result.kept_indices) {
        kept[idx] = true;
    }
    result.pruned_indices.reserve(tokens.count() - result.kept_count);
    for (std::size_t idx = 0; idx < tokens.count(); ++idx) {
        if (!kept[idx]) {
            result.pruned_indices.push_back(idx);
        }
    }
    return result;
}

}  // namespace rtprune::tokens
