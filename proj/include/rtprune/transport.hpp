// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Optimal-transport merging of the proposed-to-prune tokens into the kept
// tokens. The kept x pruned cosine score matrix is bordered with a dustbin
// row and column, the entropy-regularized coupling is found with log-space
// Sinkhorn iterations, and the dustbins are dropped before merging.

#include <cstddef>
#include <vector>

#include "rtprune/matrix.hpp"
#include "rtprune/tokens.hpp"

namespace rtprune::transport {

/// S(i, j) = cosine similarity of kept token i and pruned token j.
struct ScoreMatrix {
    Matrix<double> values;
};

/// (M+1) x (N-M+1) scores whose last row, last column and corner equal `dustbin`.
struct AugmentedScoreMatrix {
    Matrix<double> values;
    double dustbin = 0.0;

    std::size_t kept() const { return values.rows() - 1; }
    std::size_t pruned() const { return values.cols() - 1; }
};

struct SinkhornConfig {
    std::size_t iterations = 100;
    double dustbin = 0.2;
    /// Scores are divided by this before exponentiation.
    double temperature = 1.0;
    double merge_strength = 0.1;
    /// When > 0, stop as soon as the marginal residual falls to this level.
    double early_exit_tolerance = 0.0;

    void validate() const;
};

struct TransportPlan {
    Matrix<double> plan;       ///< M x (N-M), augmented plan without dustbins
    Matrix<double> augmented;  ///< (M+1) x (N-M+1)
    std::vector<double> row_mass;  ///< row sums of `plan`
    std::vector<double> col_mass;  ///< column sums of `plan`
    std::size_t iterations = 0;
    /// Largest |marginal - target| over the rows and columns of `augmented`.
    double converged_residual = 0.0;
};

/// Log marginals of the dustbin problem: mu = [1_M, N-M], nu = [1_{N-M}, M].
std::vector<double> log_row_marginal(std::size_t kept, std::size_t pruned);
std::vector<double> log_col_marginal(std::size_t kept, std::size_t pruned);

/// Throws EmptyPruneSet when the selection prunes nothing.
ScoreMatrix build_scores(const TokenMatrix& tokens, const tokens::SelectionResult& selection);

AugmentedScoreMatrix augment(const ScoreMatrix& scores, double dustbin);

/// Runs cfg.iterations alternating (row, then column) log-domain updates,
/// so the column marginals of the returned plan hold to rounding error.
TransportPlan sinkhorn(const AugmentedScoreMatrix& scores, const SinkhornConfig& cfg);

/// Row i of the result is kept token i + alpha * sum_j P(i, j) * pruned token j,
/// in ascending original index order. Inputs are not modified.
TokenMatrix merge(const TokenMatrix& tokens, const tokens::SelectionResult& selection, const TransportPlan& plan,
                  double alpha);

}  // namespace rtprune::transport
