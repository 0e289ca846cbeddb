// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Binary PGM (P5) and PPM (P6) with maxval 255.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace rtprune::io {

struct NetpbmImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 0;  ///< 1 for P5, 3 for P6
    std::vector<std::uint8_t> samples;
};

/// Throws MalformedFile for anything other than 8-bit P5/P6.
NetpbmImage read_netpbm(std::istream& in);
NetpbmImage read_netpbm(const std::filesystem::path& path);

void write_netpbm(std::ostream& out, const NetpbmImage& image);
void write_netpbm(const std::filesystem::path& path, const NetpbmImage& image);

}  // namespace rtprune::io
