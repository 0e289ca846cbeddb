// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include "rtprune/costmodel.hpp"
#include "rtprune/density.hpp"
#include "rtprune/diagnostics.hpp"
#include "rtprune/io/netpbm.hpp"
#include "rtprune/io/report.hpp"
#include "rtprune/io/tensor_file.hpp"
#include "rtprune/pipeline.hpp"
#include "rtprune/tokens.hpp"

namespace rtprune::cli {

namespace {

struct GridSpec {
    std::size_t grid_h = 0;
    std::size_t grid_w = 0;
};

GridSpec parse_grid(const std::string& text) {
    static const std::regex pattern(R"((\d+)[xX](\d+))");
    std::smatch match;
    if (!std::regex_match(text, match, pattern)) {
        fail(ErrorCode::ConfigConflict, "--grid expects GHxGW, got '" + text + "'");
    }
    return GridSpec{std::stoul(match[1]), std::stoul(match[2])};
}

pipeline::PageImage load_page(const std::string& path, const GridSpec& grid) {
    auto raw = io::read_netpbm(path);
    pipeline::PageImage page;
    page.grid_h = grid.grid_h;
    page.grid_w = grid.grid_w;
    if (raw.channels == 3) {
        page.pixels = density::RgbImage{raw.height, raw.width, std::move(raw.samples)};
    } else {
        page.pixels = density::gray_from_bytes(raw.height, raw.width, raw.samples);
    }
    return page;
}

density::GrayImage load_gray(const std::string& path) {
    auto raw = io::read_netpbm(path);
    if (raw.channels == 3) {
        return density::to_gray(density::RgbImage{raw.height, raw.width, std::move(raw.samples)});
    }
    return density::gray_from_bytes(raw.height, raw.width, raw.samples);
}

std::string fixed(double value, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << value;
    return s.str();
}

std::string precise(double value) {
    std::ostringstream s;
    s << std::setprecision(9) << value;
    return s.str();
}

// --- prune ---------------------------------------------------------------

struct PruneOptions {
    std::string tokens;
    std::string out;
    std::string image;
    std::string grid;
    std::optional<double> ratio;
    bool dynamic = false;
    std::string report;
    transport::SinkhornConfig sinkhorn;
    density::DynamicRatioConfig dynamic_cfg;
};

int cmd_prune(const PruneOptions& opt, std::ostream& out) {
    if (opt.ratio.has_value() == opt.dynamic) {
        fail(ErrorCode::ConfigConflict, "exactly one of --ratio and --dynamic is required");
    }
    if (opt.dynamic && (opt.image.empty() || opt.grid.empty())) {
        fail(ErrorCode::ConfigConflict, "--dynamic requires --image and --grid");
    }
    if (!opt.image.empty() && opt.grid.empty()) {
        fail(ErrorCode::ConfigConflict, "--image requires --grid");
    }
    if (opt.ratio && !(*opt.ratio >= 0.0 && *opt.ratio < 1.0)) {
        fail(ErrorCode::ConfigConflict, "--ratio must lie in [0, 1)");
    }
    try {
        opt.sinkhorn.validate();
        opt.dynamic_cfg.validate();
    } catch (const Error& e) {
        fail(ErrorCode::ConfigConflict, e.what());
    }

    pipeline::PruneRequest request{io::to_token_matrix(io::read_tensor(opt.tokens)), std::nullopt,
                                   pipeline::FixedRatio{}, opt.sinkhorn};
    if (!opt.image.empty()) {
        request.image = load_page(opt.image, parse_grid(opt.grid));
    }
    if (opt.dynamic) {
        request.ratio = pipeline::DynamicRatio{opt.dynamic_cfg};
    } else {
        request.ratio = pipeline::FixedRatio{*opt.ratio};
    }

    const auto result = pipeline::rtprune(request);
    io::write_tensor(opt.out, io::from_token_matrix(result.tokens));
    if (!opt.report.empty()) {
        std::ofstream report(opt.report, std::ios::trunc);
        check(report.good(), ErrorCode::InvalidInput, "cannot open report file " + opt.report);
        report << io::report_document(request, result.report).dump(2) << '\n';
    }
    out << "kept " << result.report.kept_count << " of " << result.report.token_count
        << " tokens (r=" << precise(result.report.applied_ratio) << ")\n";
    return kOk;
}

// --- density -------------------------------------------------------------

struct DensityOptions {
    std::string image;
    std::string grid;
    double tau = 0.2;
    bool json = false;
};

int cmd_density(const DensityOptions& opt, std::ostream& out) {
    const GridSpec spec = parse_grid(opt.grid);
    const auto gray = load_gray(opt.image);
    const auto grid = density::make_grid(gray.height, gray.width, spec.grid_h, spec.grid_w);
    const auto map = density::patch_density(density::sobel_magnitude(gray), grid, opt.tau);

    if (opt.json) {
        const nlohmann::json doc = {
            {"rho", map.rho}, {"tau", map.tau}, {"grid", {grid.grid_h, grid.grid_w}}, {"rho_k", map.rho_k}};
        out << doc.dump() << '\n';
        return kOk;
    }
    out << "rho " << precise(map.rho) << '\n';
    for (std::size_t r = 0; r < grid.grid_h; ++r) {
        for (std::size_t c = 0; c < grid.grid_w; ++c) {
            out << (c == 0 ? "" : " ") << precise(map.rho_k[r * grid.grid_w + c]);
        }
        out << '\n';
    }
    return kOk;
}

// --- flops ---------------------------------------------------------------

struct FlopsOptions {
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> visual;
    std::uint64_t prompt_overhead = cost::kDefaultPromptOverhead;
    std::optional<std::uint64_t> n_pruned;
    std::optional<std::uint64_t> layer;
    std::optional<double> calibrate;
    cost::DecoderCostConfig cfg;
};

int cmd_flops(const FlopsOptions& opt, std::ostream& out) {
    if (opt.n.has_value() == opt.visual.has_value()) {
        fail(ErrorCode::ConfigConflict, "exactly one of --n and --visual is required");
    }
    if (opt.n_pruned.has_value() != opt.layer.has_value()) {
        fail(ErrorCode::ConfigConflict, "--n-pruned and --layer go together");
    }
    if (opt.calibrate && opt.layer) {
        fail(ErrorCode::ConfigConflict, "--calibrate cannot be combined with --layer");
    }
    try {
        opt.cfg.validate();
    } catch (const Error& e) {
        fail(ErrorCode::ConfigConflict, e.what());
    }
    const std::uint64_t n = opt.n ? *opt.n : *opt.visual + opt.prompt_overhead;

    if (opt.calibrate) {
        const auto m = cost::calibrate_m(n, *opt.calibrate, opt.cfg);
        cost::DecoderCostConfig calibrated = opt.cfg;
        calibrated.ffn_width = m;
        const auto flops = cost::total_flops(n, calibrated);
        out << "m " << m << '\n'
            << "n " << n << " flops " << flops << " gflops " << fixed(cost::to_gflops(flops), 1) << '\n';
        return kOk;
    }
    if (opt.layer) {
        const auto flops = cost::prune_at_layer_flops(n, *opt.n_pruned, *opt.layer, opt.cfg);
        out << "n " << n << " n_pruned " << *opt.n_pruned << " layer " << *opt.layer << " flops " << flops
            << " gflops " << fixed(cost::to_gflops(flops), 1) << '\n';
        return kOk;
    }
    const auto flops = cost::total_flops(n, opt.cfg);
    out << "n " << n << " flops " << flops << " gflops " << fixed(cost::to_gflops(flops), 1) << '\n';
    return kOk;
}

// --- tir -----------------------------------------------------------------

struct TirOptions {
    std::string norms;
    std::string attn;
    std::size_t k = 0;
    bool json = false;
};

int cmd_tir(const TirOptions& opt, std::ostream& out) {
    const auto norm_tensor = io::read_tensor(opt.norms);
    std::vector<double> norms;
    if (norm_tensor.dims.size() == 1) {
        norms.assign(norm_tensor.values.begin(), norm_tensor.values.end());
    } else if (norm_tensor.dims.size() == 2) {
        // Embeddings instead of norms.
        norms = tokens::token_norms(io::to_token_matrix(norm_tensor));
    } else {
        fail(ErrorCode::MalformedFile, "--norms expects a 1-D norm vector or a 2-D token matrix");
    }
    const diagnostics::AttentionDump attention{io::to_matrix(io::read_tensor(opt.attn))};
    if (attention.tokens() != norms.size()) {
        fail(ErrorCode::MalformedFile, "attention dump does not match the number of tokens");
    }
    if (opt.k < 1 || opt.k > norms.size()) {
        fail(ErrorCode::ConfigConflict, "--k must lie in [1, N]");
    }
    const auto result = diagnostics::tir(norms, attention, opt.k);

    if (opt.json) {
        const nlohmann::json doc = {{"k", opt.k}, {"layerwise", result.layerwise}, {"cumulative", result.cumulative}};
        out << doc.dump() << '\n';
        return kOk;
    }
    out << "layer layerwise cumulative\n";
    for (std::size_t l = 0; l < result.layerwise.size(); ++l) {
        out << l << ' ' << precise(result.layerwise[l]) << ' ' << precise(result.cumulative[l]) << '\n';
    }
    return kOk;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedFile:
    case ErrorCode::InvalidInput:
        return kMalformedInput;
    case ErrorCode::ConfigConflict:
    case ErrorCode::InfeasibleCalibration:
        return kConfigConflict;
    case ErrorCode::NumericalFailure:
    case ErrorCode::EmptyPruneSet:
        return kNumericalFailure;
    }
    return kNumericalFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Visual-token pruning: norm selection, optimal-transport merging, cost model", "rtprune"};
    app.require_subcommand(1);

    PruneOptions prune;
    auto* prune_cmd = app.add_subcommand("prune", "Prune and merge a token matrix");
    prune_cmd->add_option("--tokens", prune.tokens, "Input N x D RTT tensor")->required();
    prune_cmd->add_option("--out", prune.out, "Output M x D RTT tensor")->required();
    prune_cmd->add_option("--image", prune.image, "Page image (binary PGM/PPM, maxval 255)");
    prune_cmd->add_option("--grid", prune.grid, "Patch grid GHxGW matching the token count");
    prune_cmd->add_option("--ratio", prune.ratio, "Fixed pruning ratio in [0, 1)");
    prune_cmd->add_flag("--dynamic", prune.dynamic, "Derive the ratio from token similarity and text density");
    prune_cmd->add_option("--z", prune.sinkhorn.dustbin, "Dustbin score")->capture_default_str();
    prune_cmd->add_option("--alpha", prune.sinkhorn.merge_strength, "Merge strength")->capture_default_str();
    prune_cmd->add_option("--iters", prune.sinkhorn.iterations, "Sinkhorn iterations")->capture_default_str();
    prune_cmd->add_option("--temperature", prune.sinkhorn.temperature, "Score temperature")->capture_default_str();
    prune_cmd->add_option("--tau", prune.dynamic_cfg.tau, "Edge threshold")->capture_default_str();
    prune_cmd->add_option("--r-min", prune.dynamic_cfg.r_min, "Lower clamp of the dynamic ratio")->capture_default_str();
    prune_cmd->add_option("--r-max", prune.dynamic_cfg.r_max, "Upper clamp of the dynamic ratio")->capture_default_str();
    prune_cmd->add_option("--phi-lo", prune.dynamic_cfg.phi_lo, "Similarity mapped to ratio 0")->capture_default_str();
    prune_cmd->add_option("--phi-hi", prune.dynamic_cfg.phi_hi, "Similarity mapped to ratio 1")->capture_default_str();
    prune_cmd->add_option("--report", prune.report, "Write a JSON report here");

    DensityOptions dens;
    auto* density_cmd = app.add_subcommand("density", "Per-patch Sobel edge density of a page image");
    density_cmd->add_option("--image", dens.image, "Binary PGM/PPM, maxval 255")->required();
    density_cmd->add_option("--grid", dens.grid, "Patch grid GHxGW")->required();
    density_cmd->add_option("--tau", dens.tau, "Edge threshold")->capture_default_str();
    density_cmd->add_flag("--json", dens.json, "Emit JSON");

    FlopsOptions flops;
    auto* flops_cmd = app.add_subcommand("flops", "Decoder prefill FLOPs");
    flops_cmd->add_option("--n", flops.n, "Total tokens (visual + prompt)");
    flops_cmd->add_option("--visual", flops.visual, "Visual tokens; prompt overhead is added");
    flops_cmd->add_option("--prompt-overhead", flops.prompt_overhead, "Prompt tokens added to --visual")
        ->capture_default_str();
    flops_cmd->add_option("--n-pruned", flops.n_pruned, "Token count after the pruning layer");
    flops_cmd->add_option("--layer", flops.layer, "Last layer that sees the full token count");
    flops_cmd->add_option("--calibrate", flops.calibrate, "Solve for the dense FFN width that hits this FLOPs target");
    flops_cmd->add_option("--d", flops.cfg.hidden, "Hidden size")->capture_default_str();
    flops_cmd->add_option("--m", flops.cfg.ffn_width, "Dense FFN width")->capture_default_str();
    flops_cmd->add_option("--m1", flops.cfg.expert_width, "Routed expert width")->capture_default_str();
    flops_cmd->add_option("--m2", flops.cfg.shared_expert_width, "Shared expert width")->capture_default_str();
    flops_cmd->add_option("--k", flops.cfg.active_experts, "Active routed experts")->capture_default_str();
    flops_cmd->add_option("--t1", flops.cfg.standard_layers, "Standard decoder layers")->capture_default_str();
    flops_cmd->add_option("--t2", flops.cfg.moe_layers, "MoE decoder layers")->capture_default_str();

    TirOptions tir_opt;
    auto* tir_cmd = app.add_subcommand("tir", "Top-K intersection of norm and attention rankings");
    tir_cmd->add_option("--norms", tir_opt.norms, "1-D norms or 2-D token RTT tensor")->required();
    tir_cmd->add_option("--attn", tir_opt.attn, "L x N attention RTT tensor")->required();
    tir_cmd->add_option("--k", tir_opt.k, "Top-K size")->required();
    tir_cmd->add_flag("--json", tir_opt.json, "Emit JSON");

    std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(reversed.begin(), reversed.end());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigConflict;
    }

    try {
        if (prune_cmd->parsed()) {
            return cmd_prune(prune, out);
        }
        if (density_cmd->parsed()) {
            return cmd_density(dens, out);
        }
        if (flops_cmd->parsed()) {
            return cmd_flops(flops, out);
        }
        return cmd_tir(tir_opt, out);
    } catch (const Error& e) {
        err << "rtprune: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "rtprune: internal error: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace rtprune::cli
