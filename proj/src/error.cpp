// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/error.hpp"

namespace rtprune {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput:
        return "InvalidInput";
    case ErrorCode::EmptyPruneSet:
        return "EmptyPruneSet";
    case ErrorCode::NumericalFailure:
        return "NumericalFailure";
    case ErrorCode::InfeasibleCalibration:
        return "InfeasibleCalibration";
    case ErrorCode::MalformedFile:
        return "MalformedFile";
    case ErrorCode::ConfigConflict:
        return "ConfigConflict";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      m_code(code) {}

void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace rtprune
