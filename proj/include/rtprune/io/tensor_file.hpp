// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// RTT tensor files, all fields little-endian:
//
//   offset  size       field
//   0       4          magic "RTPT"
//   4       2          version (u16) = 1
//   6       1          dtype (u8), 1 = IEEE-754 binary32
//   7       1          ndim (u8)
//   8       8 * ndim   dims (u64 each)
//   ...     4 * prod   row-major payload

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "rtprune/matrix.hpp"

namespace rtprune::io {

inline constexpr char kTensorMagic[4] = {'R', 'T', 'P', 'T'};
inline constexpr std::uint16_t kTensorVersion = 1;
inline constexpr std::uint8_t kDtypeFloat32 = 1;

struct Tensor {
    std::vector<std::uint64_t> dims;
    std::vector<float> values;

    std::uint64_t element_count() const;
};

/// Throws MalformedFile on any header or length violation.
Tensor read_tensor(std::istream& in);
Tensor read_tensor(const std::filesystem::path& path);

void write_tensor(std::ostream& out, const Tensor& tensor);
void write_tensor(const std::filesystem::path& path, const Tensor& tensor);

/// 2-D tensor to token matrix; MalformedFile if not 2-D, InvalidInput if not finite.
TokenMatrix to_token_matrix(const Tensor& tensor);
Tensor from_token_matrix(const TokenMatrix& tokens);

/// 2-D tensor widened to double.
Matrix<double> to_matrix(const Tensor& tensor);

}  // namespace rtprune::io
