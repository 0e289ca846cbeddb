// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/io/tensor_file.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

namespace rtprune::io {

namespace {

template <typename T>
T load_le(const std::uint8_t* p) {
    T value = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
        value |= static_cast<T>(static_cast<T>(p[b]) << (8 * b));
    }
    return value;
}

template <typename T>
void store_le(std::vector<std::uint8_t>& out, T value) {
    for (std::size_t b = 0; b < sizeof(T); ++b) {
        out.push_back(static_cast<std::uint8_t>((value >> (8 * b)) & 0xFF));
    }
}

void read_exact(std::istream& in, std::uint8_t* dst, std::size_t count, const char* what) {
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count));
    check(static_cast<std::size_t>(in.gcount()) == count, ErrorCode::MalformedFile,
          std::string("truncated tensor file: ") + what);
}

}  // namespace

std::uint64_t Tensor::element_count() const {
    std::uint64_t count = 1;
    for (const auto d : dims) {
        check(!__builtin_mul_overflow(count, d, &count), ErrorCode::MalformedFile, "tensor dims overflow");
    }
    return count;
}

Tensor read_tensor(std::istream& in) {
    std::array<std::uint8_t, 8> header{};
    read_exact(in, header.data(), header.size(), "header");
    check(std::equal(header.begin(), header.begin() + 4, kTensorMagic,
                     [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); }),
          ErrorCode::MalformedFile, "bad magic, expected RTPT");
    check(load_le<std::uint16_t>(header.data() + 4) == kTensorVersion, ErrorCode::MalformedFile,
          "unsupported tensor version");
    check(header[6] == kDtypeFloat32, ErrorCode::MalformedFile, "unsupported dtype");

    Tensor tensor;
    tensor.dims.resize(header[7]);
    for (auto& d : tensor.dims) {
        std::array<std::uint8_t, 8> raw{};
        read_exact(in, raw.data(), raw.size(), "dims");
        d = load_le<std::uint64_t>(raw.data());
    }

    const std::uint64_t count = tensor.element_count();
    std::uint64_t bytes = 0;
    check(!__builtin_mul_overflow(count, std::uint64_t{4}, &bytes), ErrorCode::MalformedFile, "payload too large");

    // Grow as data arrives so a lying header cannot force a huge allocation.
    std::vector<std::uint8_t> payload;
    std::array<std::uint8_t, 1 << 16> chunk{};
    while (payload.size() < bytes) {
        const std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(chunk.size(), bytes - payload.size()));
        read_exact(in, chunk.data(), want, "payload");
        payload.insert(payload.end(), chunk.begin(), chunk.begin() + static_cast<std::ptrdiff_t>(want));
    }
    check(in.peek() == std::char_traits<char>::eof(), ErrorCode::MalformedFile, "trailing bytes after payload");

    tensor.values.resize(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < tensor.values.size(); ++i) {
        tensor.values[i] = std::bit_cast<float>(load_le<std::uint32_t>(payload.data() + 4 * i));
    }
    return tensor;
}

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    check(in.good(), ErrorCode::MalformedFile, "cannot open tensor file " + path.string());
    return read_tensor(in);
}

void write_tensor(std::ostream& out, const Tensor& tensor) {
    check(tensor.dims.size() <= 255, ErrorCode::InvalidInput, "too many tensor dims");
    check(tensor.element_count() == tensor.values.size(), ErrorCode::InvalidInput,
          "tensor values do not match dims");
    std::vector<std::uint8_t> bytes;
    bytes.reserve(8 + 8 * tensor.dims.size() + 4 * tensor.values.size());
    for (const char c : kTensorMagic) {
        bytes.push_back(static_cast<std::uint8_t>(c));
    }
    store_le<std::uint16_t>(bytes, kTensorVersion);
    bytes.push_back(kDtypeFloat32);
    bytes.push_back(static_cast<std::uint8_t>(tensor.dims.size()));
    for (const auto d : tensor.dims) {
        store_le<std::uint64_t>(bytes, d);
    }
    for (const float v : tensor.values) {
        store_le<std::uint32_t>(bytes, std::bit_cast<std::uint32_t>(v));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    check(out.good(), ErrorCode::InvalidInput, "failed to write tensor");
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    check(out.good(), ErrorCode::InvalidInput, "cannot open " + path.string() + " for writing");
    write_tensor(out, tensor);
}

TokenMatrix to_token_matrix(const Tensor& tensor) {
    check(tensor.dims.size() == 2, ErrorCode::MalformedFile, "token tensor must be 2-D");
    return TokenMatrix(static_cast<std::size_t>(tensor.dims[0]), static_cast<std::size_t>(tensor.dims[1]),
                       tensor.values);
}

Tensor from_token_matrix(const TokenMatrix& tokens) {
    const auto data = tokens.matrix().data();
    return Tensor{{tokens.count(), tokens.dim()}, std::vector<float>(data.begin(), data.end())};
}

Matrix<double> to_matrix(const Tensor& tensor) {
    check(tensor.dims.size() == 2, ErrorCode::MalformedFile, "expected a 2-D tensor");
    return Matrix<double>(static_cast<std::size_t>(tensor.dims[0]), static_cast<std::size_t>(tensor.dims[1]),
                          std::vector<double>(tensor.values.begin(), tensor.values.end()));
}

}  // namespace rtprune::io
