// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "rtprune/parallel.hpp"
#include "rtprune/simd/kernels.hpp"

namespace rtprune::transport {

namespace {

// log(sum_k exp(z[k] + shift[k])) with the max-shift formulation.
double log_sum_exp(std::span<const double> z, std::span<const double> shift) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < z.size(); ++k) {
        peak = std::max(peak, z[k] + shift[k]);
    }
    if (!std::isfinite(peak)) {
        return peak;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        acc += std::exp(z[k] + shift[k] - peak);
    }
    return peak + std::log(acc);
}

// dual[i] = target[i] - LSE_k(z(i, k) + other[k]) for every row i of z.
void dual_update(const Matrix<double>& z, std::span<const double> target, std::span<const double> other,
                 std::span<double> dual) {
    parallel_for(z.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            dual[i] = target[i] - log_sum_exp(z.row(i), other);
        }
    });
}

bool all_finite(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Matrix<double> exp_plan(const Matrix<double>& z, std::span<const double> u, std::span<const double> v) {
    Matrix<double> out(z.rows(), z.cols());
    for (std::size_t i = 0; i < z.rows(); ++i) {
        for (std::size_t j = 0; j < z.cols(); ++j) {
            out(i, j) = std::exp(z(i, j) + u[i] + v[j]);
        }
    }
    return out;
}

double marginal_residual(const Matrix<double>& plan, std::span<const double> log_mu, std::span<const double> log_nu) {
    double worst = 0.0;
    std::vector<double> col(plan.cols(), 0.0);
    for (std::size_t i = 0; i < plan.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < plan.cols(); ++j) {
            row += plan(i, j);
            col[j] += plan(i, j);
        }
        worst = std::max(worst, std::abs(row - std::exp(log_mu[i])));
    }
    for (std::size_t j = 0; j < plan.cols(); ++j) {
        worst = std::max(worst, std::abs(col[j] - std::exp(log_nu[j])));
    }
    return worst;
}

}  // namespace

void SinkhornConfig::validate() const {
    check(iterations >= 1, ErrorCode::InvalidInput, "sinkhorn iterations must be >= 1");
    check(std::isfinite(temperature) && temperature > 0.0, ErrorCode::InvalidInput, "temperature must be > 0");
    check(std::isfinite(dustbin), ErrorCode::InvalidInput, "dustbin score must be finite");
    check(std::isfinite(merge_strength) && merge_strength >= 0.0, ErrorCode::InvalidInput,
          "merge strength must be >= 0");
    check(std::isfinite(early_exit_tolerance) && early_exit_tolerance >= 0.0, ErrorCode::InvalidInput,
          "early-exit tolerance must be >= 0");
}

std::vector<double> log_row_marginal(std::size_t kept, std::size_t pruned) {
    std::vector<double> out(kept + 1, 0.0);
    out.back() = std::log(static_cast<double>(pruned));
    return out;
}

std::vector<double> log_col_marginal(std::size_t kept, std::size_t pruned) {
    std::vector<double> out(pruned + 1, 0.0);
    out.back() = std::log(static_cast<double>(kept));
    return out;
}

ScoreMatrix build_scores(const TokenMatrix& tokens, const tokens::SelectionResult& selection) {
    const auto& kept = selection.kept_indices;
    const auto& pruned = selection.pruned_indices;
    if (pruned.empty()) {
        fail(ErrorCode::EmptyPruneSet, "no tokens proposed for pruning");
    }
    check(!kept.empty(), ErrorCode::InvalidInput, "selection keeps no tokens");
    check(kept.size() + pruned.size() == tokens.count(), ErrorCode::InvalidInput,
          "selection does not partition the token matrix");
    for (const auto idx : kept) {
        check(idx < tokens.count(), ErrorCode::InvalidInput, "kept index out of range");
    }
    for (const auto idx : pruned) {
        check(idx < tokens.count(), ErrorCode::InvalidInput, "pruned index out of range");
    }

    const auto& k = simd::kernels();
    const std::size_t d = tokens.dim();
    std::vector<double> sq(tokens.count());
    for (std::size_t t = 0; t < tokens.count(); ++t) {
        sq[t] = k.sum_squares(tokens.row(t).data(), d);
    }

    ScoreMatrix scores{Matrix<double>(kept.size(), pruned.size())};
    parallel_for(kept.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t a = kept[i];
            for (std::size_t j = 0; j < pruned.size(); ++j) {
                const std::size_t b = pruned[j];
                if (sq[a] == 0.0 || sq[b] == 0.0) {
                    scores.values(i, j) = 0.0;
                    continue;
                }
                const double dot = k.dot(tokens.row(a).data(), tokens.row(b).data(), d);
                scores.values(i, j) = std::clamp(dot / std::sqrt(sq[a] * sq[b]), -1.0, 1.0);
            }
        }
    }, 4);
    return scores;
}

AugmentedScoreMatrix augment(const ScoreMatrix& scores, double dustbin) {
    const std::size_t rows = scores.values.rows();
    const std::size_t cols = scores.values.cols();
    AugmentedScoreMatrix out{Matrix<double>(rows + 1, cols + 1, dustbin), dustbin};
    for (std::size_t i = 0; i < rows; ++i) {
        const auto src = scores.values.row(i);
        std::copy(src.begin(), src.end(), out.values.row(i).begin());
    }
    return out;
}

TransportPlan sinkhorn(const AugmentedScoreMatrix& scores, const SinkhornConfig& cfg) {
    cfg.validate();
    const std::size_t kept = scores.kept();
    const std::size_t pruned = scores.pruned();
    check(scores.values.rows() >= 2 && scores.values.cols() >= 2, ErrorCode::InvalidInput,
          "sinkhorn needs at least one kept and one pruned token");
    check(all_finite(scores.values.data()), ErrorCode::InvalidInput, "score matrix has non-finite entries");

    const std::size_t rows = kept + 1;
    const std::size_t cols = pruned + 1;
    Matrix<double> z(rows, cols);
    Matrix<double> zt(cols, rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            z(i, j) = scores.values(i, j) / cfg.temperature;
            zt(j, i) = z(i, j);
        }
    }

    const auto log_mu = log_row_marginal(kept, pruned);
    const auto log_nu = log_col_marginal(kept, pruned);
    std::vector<double> u(rows, 0.0);
    std::vector<double> v(cols, 0.0);

    TransportPlan result;
    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        dual_update(z, log_mu, v, u);
        dual_update(zt, log_nu, u, v);
        result.iterations = t + 1;
        if (!all_finite(u) || !all_finite(v)) {
            fail(ErrorCode::NumericalFailure, "sinkhorn dual variables became non-finite");
        }
        if (cfg.early_exit_tolerance > 0.0 &&
            marginal_residual(exp_plan(z, u, v), log_mu, log_nu) <= cfg.early_exit_tolerance) {
            break;
        }
    }

    result.augmented = exp_plan(z, u, v);
    if (!all_finite(result.augmented.data())) {
        fail(ErrorCode::NumericalFailure, "sinkhorn plan has non-finite entries");
    }
    result.converged_residual = marginal_residual(result.augmented, log_mu, log_nu);

    result.plan = Matrix<double>(kept, pruned);
    result.row_mass.assign(kept, 0.0);
    result.col_mass.assign(pruned, 0.0);
    for (std::size_t i = 0; i < kept; ++i) {
        for (std::size_t j = 0; j < pruned; ++j) {
            const double p = result.augmented(i, j);
            result.plan(i, j) = p;
            result.row_mass[i] += p;
            result.col_mass[j] += p;
        }
    }
    return result;
}

TokenMatrix merge(const TokenMatrix& tokens, const tokens::SelectionResult& selection, const TransportPlan& plan,
                  double alpha) {
    const auto& kept = selection.kept_indices;
    const auto& pruned = selection.pruned_indices;
    check(std::isfinite(alpha) && alpha >= 0.0, ErrorCode::InvalidInput, "merge strength must be >= 0");
    check(!kept.empty(), ErrorCode::InvalidInput, "selection keeps no tokens");
    check(kept.size() + pruned.size() == tokens.count(), ErrorCode::InvalidInput,
          "selection does not partition the token matrix");
    check(plan.plan.rows() == kept.size() && plan.plan.cols() == pruned.size(), ErrorCode::InvalidInput,
          "transport plan shape does not match the selection");

    const std::size_t d = tokens.dim();
    Matrix<float> out(kept.size(), d);
    if (alpha == 0.0) {
        for (std::size_t i = 0; i < kept.size(); ++i) {
            const auto src = tokens.row(kept[i]);
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return TokenMatrix(std::move(out));
    }

    const auto& k = simd::kernels();
    parallel_for(kept.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> absorbed(d);
        for (std::size_t i = begin; i < end; ++i) {
            std::fill(absorbed.begin(), absorbed.end(), 0.0);
            for (std::size_t j = 0; j < pruned.size(); ++j) {
                k.axpy(plan.plan(i, j), tokens.row(pruned[j]).data(), absorbed.data(), d);
            }
            const auto src = tokens.row(kept[i]);
            auto dst = out.row(i);
            for (std::size_t c = 0; c < d; ++c) {
                dst[c] = static_cast<float>(static_cast<double>(src[c]) + alpha * absorbed[c]);
            }
        }
    }, 4);
    return TokenMatrix(std::move(out));
}

}  // namespace rtprune::transport
