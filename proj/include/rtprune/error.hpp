// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rtprune {

enum class ErrorCode {
    InvalidInput,
    EmptyPruneSet,
    NumericalFailure,
    InfeasibleCalibration,
    MalformedFile,
    ConfigConflict,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void check(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) {
        fail(code, what);
    }
}

}  // namespace rtprune
