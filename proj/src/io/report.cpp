// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/io/report.hpp"

#include "rtprune/simd/kernels.hpp"
#include "rtprune/version.hpp"

namespace rtprune::io {

namespace {

template <typename T>
nlohmann::json optional_value(const std::optional<T>& value) {
    return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

template <typename T>
std::optional<T> optional_field(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || doc.at(key).is_null()) {
        return std::nullopt;
    }
    return doc.at(key).get<T>();
}

}  // namespace

nlohmann::json report_to_json(const pipeline::PruneReport& report) {
    return {
        {"applied_r", report.applied_ratio},
        {"N", report.token_count},
        {"M", report.kept_count},
        {"kept_indices", report.kept_indices},
        {"phi", optional_value(report.phi)},
        {"rho", optional_value(report.rho)},
        {"sinkhorn_residual", optional_value(report.sinkhorn_residual)},
        {"sinkhorn_iterations", report.sinkhorn_iterations},
        {"merged_mass_per_kept", report.merged_mass_per_kept},
        {"timing_ms", report.timing_ms},
    };
}

pipeline::PruneReport report_from_json(const nlohmann::json& doc) {
    try {
        pipeline::PruneReport report;
        report.applied_ratio = doc.at("applied_r").get<double>();
        report.token_count = doc.at("N").get<std::size_t>();
        report.kept_count = doc.at("M").get<std::size_t>();
        report.kept_indices = doc.at("kept_indices").get<std::vector<std::size_t>>();
        report.phi = optional_field<double>(doc, "phi");
        report.rho = optional_field<double>(doc, "rho");
        report.sinkhorn_residual = optional_field<double>(doc, "sinkhorn_residual");
        report.sinkhorn_iterations = doc.at("sinkhorn_iterations").get<std::size_t>();
        report.merged_mass_per_kept = doc.at("merged_mass_per_kept").get<std::vector<double>>();
        report.timing_ms = doc.at("timing_ms").get<std::map<std::string, double>>();
        return report;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::MalformedFile, std::string("bad report document: ") + e.what());
    }
}

nlohmann::json config_to_json(const pipeline::PruneRequest& request) {
    const auto& s = request.sinkhorn;
    nlohmann::json cfg = {
        {"sinkhorn",
         {{"iterations", s.iterations},
          {"z", s.dustbin},
          {"temperature", s.temperature},
          {"alpha", s.merge_strength},
          {"early_exit_tolerance", s.early_exit_tolerance}}},
    };
    if (const auto* fixed = std::get_if<pipeline::FixedRatio>(&request.ratio)) {
        cfg["ratio_mode"] = "fixed";
        cfg["ratio"] = fixed->ratio;
    } else {
        const auto& d = std::get<pipeline::DynamicRatio>(request.ratio).config;
        cfg["ratio_mode"] = "dynamic";
        cfg["dynamic"] = {{"tau", d.tau}, {"phi_lo", d.phi_lo}, {"phi_hi", d.phi_hi},
                          {"r_min", d.r_min}, {"r_max", d.r_max}};
    }
    if (request.image) {
        cfg["grid"] = {request.image->grid_h, request.image->grid_w};
    }
    cfg["tokens"] = {request.tokens.count(), request.tokens.dim()};
    return cfg;
}

nlohmann::json report_document(const pipeline::PruneRequest& request, const pipeline::PruneReport& report) {
    return {
        {"tool", "rtprune"},
        {"version", kVersion},
        {"simd", std::string(simd::name(simd::kernels().isa))},
        {"config", config_to_json(request)},
        {"report", report_to_json(report)},
    };
}

}  // namespace rtprune::io
