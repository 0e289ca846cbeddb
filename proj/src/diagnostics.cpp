// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "rtprune/tokens.hpp"

namespace rtprune::diagnostics {

TirResult tir(std::span<const double> norms, const AttentionDump& attention, std::size_t k) {
    const std::size_t n = norms.size();
    check(n >= 1, ErrorCode::InvalidInput, "TIR needs at least one token");
    check(attention.tokens() == n, ErrorCode::InvalidInput, "attention dump does not match the token count");
    check(attention.layers() >= 1, ErrorCode::InvalidInput, "attention dump has no layers");
    check(k >= 1 && k <= n, ErrorCode::InvalidInput, "K must lie in [1, N]");
    const auto finite = [](double v) { return std::isfinite(v); };
    check(std::all_of(norms.begin(), norms.end(), finite) &&
              std::all_of(attention.scores.data().begin(), attention.scores.data().end(), finite),
          ErrorCode::InvalidInput, "TIR inputs must be finite");

    std::vector<bool> by_norm(n, false);
    for (const auto idx : tokens::top_k_indices(norms, k)) {
        by_norm[idx] = true;
    }

    TirResult out;
    out.layerwise.reserve(attention.layers());
    out.cumulative.reserve(attention.layers());
    std::vector<bool> seen(n, false);
    std::size_t union_hits = 0;
    const double denom = static_cast<double>(k);
    for (std::size_t layer = 0; layer < attention.layers(); ++layer) {
        std::size_t hits = 0;
        for (const auto idx : tokens::top_k_indices(attention.scores.row(layer), k)) {
            if (!by_norm[idx]) {
                continue;
            }
            ++hits;
            if (!seen[idx]) {
                seen[idx] = true;
                ++union_hits;
            }
        }
        out.layerwise.push_back(static_cast<double>(hits) / denom);
        out.cumulative.push_back(static_cast<double>(union_hits) / denom);
    }
    return out;
}

}  // namespace rtprune::diagnostics
