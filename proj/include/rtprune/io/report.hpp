// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "rtprune/pipeline.hpp"

namespace rtprune::io {

nlohmann::json report_to_json(const pipeline::PruneReport& report);
pipeline::PruneReport report_from_json(const nlohmann::json& doc);

/// Every knob of the request except the tensors themselves.
nlohmann::json config_to_json(const pipeline::PruneRequest& request);

/// {"tool", "version", "simd", "config", "report"}
nlohmann::json report_document(const pipeline::PruneRequest& request, const pipeline::PruneReport& report);

}  // namespace rtprune::io
