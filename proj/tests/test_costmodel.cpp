// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "rtprune/costmodel.hpp"
#include "rtprune/error.hpp"

using namespace rtprune;
using namespace rtprune::cost;

TEST_CASE("layer formulas") {
    CHECK(attn_flops(0, 1280) == 0);
    CHECK(attn_flops(1, 1) == 12);
    // 8*283*1280^2 + 4*283^2*1280, evaluated exactly.
    CHECK(attn_flops(283, 1280) == 4119393280ULL);
    CHECK(ffn_flops(0, 1280, 6854) == 0);
    CHECK(moe_flops(0, 1280, 6, 896, 1792) == 0);
    CHECK(ffn_flops(1, 1, 1) == 6);
    // 6*283*1280*(6*896 + 1792) = 6*283*1280*7168
    CHECK(moe_flops(283, 1280, 6, 896, 1792) == 15579217920ULL);
}

TEST_CASE("total_flops matches the layer-sum oracle") {
    const testing::FlopsOracle oracle;
    const DecoderCostConfig cfg;
    for (std::uint64_t n : {0, 1, 27, 219, 240, 283, 331, 367, 431, 2048}) {
        CHECK(total_flops(n, cfg) == static_cast<std::uint64_t>(oracle.total(n)));
    }
}

TEST_CASE("total_flops is strictly increasing in n") {
    const DecoderCostConfig cfg;
    for (std::uint64_t n = 1; n < 2000; ++n) {
        CHECK(total_flops(n + 1, cfg) > total_flops(n, cfg));
    }
}

TEST_CASE("calibration recovers the baseline width") {
    DecoderCostConfig cfg;
    cfg.ffn_width = 1;
    CHECK(calibrate_m(283, 235.7e9, cfg) == 6854);
    CHECK(kCalibratedFfnWidth == 6854);
}

TEST_CASE("calibration inverts total_flops") {
    for (std::uint64_t m : {1, 512, 4096, 6854, 11008}) {
        for (std::uint64_t n : {1, 64, 283, 431}) {
            DecoderCostConfig cfg;
            cfg.ffn_width = m;
            CHECK(calibrate_m(n, static_cast<double>(total_flops(n, cfg)), cfg) == m);
        }
    }
}

TEST_CASE("calibration below the attention cost is infeasible") {
    const DecoderCostConfig cfg;
    try {
        calibrate_m(283, 1e9, cfg);
        FAIL("expected InfeasibleCalibration");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InfeasibleCalibration);
    }
    CHECK_THROWS_AS(calibrate_m(0, 1e9, cfg), Error);
}

TEST_CASE("prune_at_layer_flops") {
    const DecoderCostConfig cfg;
    const testing::FlopsOracle oracle;
    CHECK(prune_at_layer_flops(283, 219, 11, cfg) == total_flops(283, cfg));
    for (std::uint64_t l = 0; l < 12; ++l) {
        CHECK(prune_at_layer_flops(283, 219, l, cfg) == static_cast<std::uint64_t>(oracle.pruned_after(283, 219, l)));
    }
    // Constant increment across the MoE layers.
    const auto step = layer_flops(283, 5, cfg) - layer_flops(219, 5, cfg);
    for (std::uint64_t l = 1; l < 12; ++l) {
        CHECK(prune_at_layer_flops(283, 219, l, cfg) - prune_at_layer_flops(283, 219, l - 1, cfg) == step);
    }
    CHECK(to_gflops(step) == doctest::Approx(4.53).epsilon(0.01));
    CHECK_THROWS_AS(prune_at_layer_flops(283, 219, 12, cfg), Error);
}

TEST_CASE("layer_flops puts the standard layers first") {
    DecoderCostConfig cfg;
    cfg.standard_layers = 2;
    cfg.moe_layers = 3;
    CHECK(layer_flops(10, 0, cfg) == layer_flops(10, 1, cfg));
    CHECK(layer_flops(10, 2, cfg) == attn_flops(10, 1280) + moe_flops(10, 1280, 6, 896, 1792));
    CHECK(layer_flops(10, 1, cfg) == attn_flops(10, 1280) + ffn_flops(10, 1280, cfg.ffn_width));
    CHECK_THROWS_AS(layer_flops(10, 5, cfg), Error);
}

TEST_CASE("invalid configs and overflow") {
    DecoderCostConfig cfg;
    cfg.hidden = 0;
    CHECK_THROWS_AS(total_flops(10, cfg), Error);
    CHECK_THROWS_AS(total_flops(1ULL << 40, DecoderCostConfig{}), Error);
}
