// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rtprune/error.hpp"

namespace rtprune {

/// Dense row-major matrix with value semantics.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : m_rows(rows),
          m_cols(cols),
          m_data(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : m_rows(rows),
          m_cols(cols),
          m_data(std::move(data)) {
        check(m_data.size() == rows * cols, ErrorCode::InvalidInput, "matrix payload does not match shape");
    }

    std::size_t rows() const noexcept { return m_rows; }
    std::size_t cols() const noexcept { return m_cols; }
    bool empty() const noexcept { return m_data.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return m_data[r * m_cols + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return m_data[r * m_cols + c]; }

    std::span<T> row(std::size_t r) { return {m_data.data() + r * m_cols, m_cols}; }
    std::span<const T> row(std::size_t r) const { return {m_data.data() + r * m_cols, m_cols}; }

    std::span<T> data() noexcept { return m_data; }
    std::span<const T> data() const noexcept { return m_data; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<T> m_data;
};

/// N x D visual-token embeddings, row k is token k in raster order.
/// Construction validates N >= 1, D >= 1 and that every entry is finite.
class TokenMatrix {
public:
    explicit TokenMatrix(Matrix<float> data);
    TokenMatrix(std::size_t n, std::size_t d, std::vector<float> data);

    std::size_t count() const noexcept { return m_data.rows(); }
    std::size_t dim() const noexcept { return m_data.cols(); }

    std::span<const float> row(std::size_t k) const { return m_data.row(k); }
    const Matrix<float>& matrix() const noexcept { return m_data; }

    bool operator==(const TokenMatrix&) const = default;

private:
    Matrix<float> m_data;
};

}  // namespace rtprune
