// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Analytic prefill FLOPs of the MoE language decoder: T1 standard layers
// (attention + dense FFN) followed by T2 MoE layers (attention + k routed
// experts + one shared expert). All counts are exact integers.

#include <cstddef>
#include <cstdint>

namespace rtprune::cost {

using Flops = std::uint64_t;

/// Dense-FFN width recovered by calibrate_m() from the 256-visual-token
/// (283 total tokens) baseline at 235.7 GFLOPs.
inline constexpr std::uint64_t kCalibratedFfnWidth = 6854;

/// Prompt tokens that accompany the visual tokens in the baseline (283 - 256).
inline constexpr std::uint64_t kDefaultPromptOverhead = 27;

struct DecoderCostConfig {
    std::uint64_t hidden = 1280;                   // d
    std::uint64_t ffn_width = kCalibratedFfnWidth;  // m
    std::uint64_t expert_width = 896;              // m1
    std::uint64_t shared_expert_width = 1792;      // m2
    std::uint64_t active_experts = 6;              // k
    std::uint64_t standard_layers = 1;             // T1
    std::uint64_t moe_layers = 11;                 // T2

    void validate() const;
    std::uint64_t layers() const { return standard_layers + moe_layers; }
};

/// 8nd^2 + 4n^2d
Flops attn_flops(std::uint64_t n, std::uint64_t d);
/// 6ndm
Flops ffn_flops(std::uint64_t n, std::uint64_t d, std::uint64_t m);
/// 6nd(k*m1 + m2)
Flops moe_flops(std::uint64_t n, std::uint64_t d, std::uint64_t k, std::uint64_t m1, std::uint64_t m2);

/// Cost of decoder layer `layer` (0-based; the standard layers come first).
Flops layer_flops(std::uint64_t n, std::uint64_t layer, const DecoderCostConfig& cfg);

Flops total_flops(std::uint64_t n, const DecoderCostConfig& cfg);

/// Dense-FFN width that makes total_flops(n) hit `target_flops`, rounded to
/// the nearest integer. cfg.ffn_width is ignored. Throws InfeasibleCalibration
/// when the m-independent cost already reaches the target.
std::uint64_t calibrate_m(std::uint64_t n, double target_flops, const DecoderCostConfig& cfg);

/// Layers 0..layer run on n_full tokens and the remaining layers on n_pruned.
Flops prune_at_layer_flops(std::uint64_t n_full, std::uint64_t n_pruned, std::uint64_t layer,
                           const DecoderCostConfig& cfg);

inline double to_gflops(Flops flops) {
    return static_cast<double>(flops) / 1e9;
}

}  // namespace rtprune::cost
