// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rtprune/density.hpp"
#include "rtprune/matrix.hpp"
#include "rtprune/transport.hpp"

namespace rtprune::pipeline {

struct FixedRatio {
    double ratio = 0.0;
};

struct DynamicRatio {
    density::DynamicRatioConfig config;
};

using RatioMode = std::variant<FixedRatio, DynamicRatio>;

/// Page image aligned to the token grid; required for DynamicRatio.
struct PageImage {
    std::variant<density::RgbImage, density::GrayImage> pixels;
    std::size_t grid_h = 0;
    std::size_t grid_w = 0;
};

struct PruneRequest {
    TokenMatrix tokens;
    std::optional<PageImage> image;
    RatioMode ratio = FixedRatio{};
    transport::SinkhornConfig sinkhorn;
};

struct PruneReport {
    double applied_ratio = 0.0;
    std::size_t kept_count = 0;
    std::size_t token_count = 0;
    std::vector<std::size_t> kept_indices;
    std::optional<double> phi;
    std::optional<double> rho;
    /// Absent when the transport stage was skipped.
    std::optional<double> sinkhorn_residual;
    std::size_t sinkhorn_iterations = 0;
    std::vector<double> merged_mass_per_kept;  ///< row sums of the plan; empty when skipped
    std::map<std::string, double> timing_ms;
};

struct PruneResult {
    TokenMatrix tokens;
    PruneReport report;
};

/// Optional dynamic ratio, norm-based selection, dustbin optimal transport
/// and merge. Output rows keep ascending original token order.
PruneResult rtprune(const PruneRequest& request);

}  // namespace rtprune::pipeline
