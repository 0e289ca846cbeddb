// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace rtprune {

TokenMatrix::TokenMatrix(Matrix<float> data)
    : m_data(std::move(data)) {
    check(m_data.rows() >= 1 && m_data.cols() >= 1, ErrorCode::InvalidInput, "token matrix must be at least 1x1");
    const auto values = m_data.data();
    check(std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); }),
          ErrorCode::InvalidInput,
          "token matrix contains non-finite entries");
}

TokenMatrix::TokenMatrix(std::size_t n, std::size_t d, std::vector<float> data)
    : TokenMatrix(Matrix<float>(n, d, std::move(data))) {}

}  // namespace rtprune
