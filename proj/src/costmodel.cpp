// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/costmodel.hpp"

#include <cmath>

#include "rtprune/error.hpp"

namespace rtprune::cost {

namespace {

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    check(!__builtin_mul_overflow(a, b, &out), ErrorCode::InvalidInput, "FLOPs count overflows 64 bits");
    return out;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    check(!__builtin_add_overflow(a, b, &out), ErrorCode::InvalidInput, "FLOPs count overflows 64 bits");
    return out;
}

}  // namespace

void DecoderCostConfig::validate() const {
    check(hidden > 0 && ffn_width > 0 && expert_width > 0 && shared_expert_width > 0 && active_experts > 0 &&
              standard_layers > 0 && moe_layers > 0,
          ErrorCode::InvalidInput, "decoder cost parameters must be positive integers");
}

Flops attn_flops(std::uint64_t n, std::uint64_t d) {
    return add(mul(8, mul(n, mul(d, d))), mul(4, mul(mul(n, n), d)));
}

Flops ffn_flops(std::uint64_t n, std::uint64_t d, std::uint64_t m) {
    return mul(6, mul(n, mul(d, m)));
}

Flops moe_flops(std::uint64_t n, std::uint64_t d, std::uint64_t k, std::uint64_t m1, std::uint64_t m2) {
    return mul(6, mul(n, mul(d, add(mul(k, m1), m2))));
}

Flops layer_flops(std::uint64_t n, std::uint64_t layer, const DecoderCostConfig& cfg) {
    cfg.validate();
    check(layer < cfg.layers(), ErrorCode::InvalidInput, "layer index out of range");
    const Flops attn = attn_flops(n, cfg.hidden);
    if (layer < cfg.standard_layers) {
        return add(attn, ffn_flops(n, cfg.hidden, cfg.ffn_width));
    }
    return add(attn, moe_flops(n, cfg.hidden, cfg.active_experts, cfg.expert_width, cfg.shared_expert_width));
}

Flops total_flops(std::uint64_t n, const DecoderCostConfig& cfg) {
    cfg.validate();
    const Flops standard = add(attn_flops(n, cfg.hidden), ffn_flops(n, cfg.hidden, cfg.ffn_width));
    const Flops moe = add(attn_flops(n, cfg.hidden),
                          moe_flops(n, cfg.hidden, cfg.active_experts, cfg.expert_width, cfg.shared_expert_width));
    return add(mul(cfg.standard_layers, standard), mul(cfg.moe_layers, moe));
}

std::uint64_t calibrate_m(std::uint64_t n, double target_flops, const DecoderCostConfig& cfg) {
    DecoderCostConfig probe = cfg;
    probe.ffn_width = 1;
    probe.validate();
    check(std::isfinite(target_flops), ErrorCode::InvalidInput, "calibration target must be finite");
    check(n > 0, ErrorCode::InfeasibleCalibration, "cannot calibrate at zero tokens");

    const Flops fixed = add(mul(cfg.layers(), attn_flops(n, cfg.hidden)),
                            mul(cfg.moe_layers, moe_flops(n, cfg.hidden, cfg.active_experts, cfg.expert_width,
                                                          cfg.shared_expert_width)));
    const long double numerator = static_cast<long double>(target_flops) - static_cast<long double>(fixed);
    if (!(numerator > 0.0L)) {
        fail(ErrorCode::InfeasibleCalibration, "target is not above the FFN-independent cost");
    }
    const long double per_unit = static_cast<long double>(mul(6, mul(n, mul(cfg.hidden, cfg.standard_layers))));
    const long double m = std::round(numerator / per_unit);
    if (m < 1.0L) {
        fail(ErrorCode::InfeasibleCalibration, "calibrated FFN width rounds to zero");
    }
    return static_cast<std::uint64_t>(m);
}

Flops prune_at_layer_flops(std::uint64_t n_full, std::uint64_t n_pruned, std::uint64_t layer,
                           const DecoderCostConfig& cfg) {
    cfg.validate();
    check(layer < cfg.layers(), ErrorCode::InvalidInput, "pruning layer out of range");
    Flops total = 0;
    for (std::uint64_t l = 0; l < cfg.layers(); ++l) {
        total = add(total, layer_flops(l <= layer ? n_full : n_pruned, l, cfg));
    }
    return total;
}

}  // namespace rtprune::cost
