// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rtprune/matrix.hpp"

namespace rtprune::diagnostics {

/// Row l holds layer l's pooled attention to each visual token (L x N).
/// Pooling over heads and queries happens before this point.
struct AttentionDump {
    Matrix<double> scores;

    std::size_t layers() const { return scores.rows(); }
    std::size_t tokens() const { return scores.cols(); }
};

/// Top-K intersection ratio between the norm ranking and each layer's
/// attention ranking, and against the running union of attention top-K sets.
struct TirResult {
    std::vector<double> layerwise;
    std::vector<double> cumulative;
};

TirResult tir(std::span<const double> norms, const AttentionDump& attention, std::size_t k);

}  // namespace rtprune::diagnostics
