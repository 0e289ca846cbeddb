// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/pipeline.hpp"

#include <chrono>

#include "rtprune/tokens.hpp"

namespace rtprune::pipeline {

namespace {

class StageTimer {
public:
    explicit StageTimer(std::map<std::string, double>& sink)
        : m_sink(sink) {}

    template <typename F>
    decltype(auto) run(const std::string& stage, F&& body) {
        const auto start = std::chrono::steady_clock::now();
        struct Record {
            StageTimer& self;
            const std::string& stage;
            std::chrono::steady_clock::time_point start;
            ~Record() {
                const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
                self.m_sink[stage] += elapsed.count();
            }
        } record{*this, stage, start};
        return body();
    }

private:
    std::map<std::string, double>& m_sink;
};

density::GrayImage page_gray(const PageImage& page) {
    if (const auto* rgb = std::get_if<density::RgbImage>(&page.pixels)) {
        return density::to_gray(*rgb);
    }
    return std::get<density::GrayImage>(page.pixels);
}

}  // namespace

PruneResult rtprune(const PruneRequest& request) {
    request.sinkhorn.validate();
    const TokenMatrix& tokens = request.tokens;

    PruneReport report;
    report.token_count = tokens.count();
    StageTimer timer(report.timing_ms);

    double ratio = 0.0;
    if (const auto* fixed = std::get_if<FixedRatio>(&request.ratio)) {
        ratio = fixed->ratio;
    } else {
        const auto& cfg = std::get<DynamicRatio>(request.ratio).config;
        cfg.validate();
        check(request.image.has_value(), ErrorCode::InvalidInput, "dynamic pruning ratio requires a page image");
        const PageImage& page = *request.image;
        check(page.grid_h * page.grid_w == tokens.count(), ErrorCode::InvalidInput,
              "patch grid does not match the token count");

        report.rho = timer.run("density", [&] {
            const auto gray = page_gray(page);
            const auto grid = density::make_grid(gray.height, gray.width, page.grid_h, page.grid_w);
            return density::patch_density(density::sobel_magnitude(gray), grid, cfg.tau).rho;
        });
        report.phi = timer.run("similarity", [&] { return tokens::mean_pairwise_similarity(tokens); });
        ratio = density::dynamic_ratio(*report.phi, *report.rho, cfg);
    }

    const auto selection = timer.run("selection", [&] { return tokens::select_dominant(tokens, ratio); });
    report.applied_ratio = ratio;
    report.kept_count = selection.kept_count;
    report.kept_indices = selection.kept_indices;

    if (selection.pruned_indices.empty()) {
        return PruneResult{tokens, std::move(report)};
    }

    const auto plan = timer.run("transport", [&] {
        const auto scores = transport::augment(transport::build_scores(tokens, selection), request.sinkhorn.dustbin);
        return transport::sinkhorn(scores, request.sinkhorn);
    });
    report.sinkhorn_residual = plan.converged_residual;
    report.sinkhorn_iterations = plan.iterations;
    report.merged_mass_per_kept = plan.row_mass;

    auto merged = timer.run("merge", [&] {
        return transport::merge(tokens, selection, plan, request.sinkhorn.merge_strength);
    });
    return PruneResult{std::move(merged), std::move(report)};
}

}  // namespace rtprune::pipeline
