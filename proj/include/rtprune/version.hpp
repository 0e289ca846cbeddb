// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace rtprune {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rtprune
