// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/io/netpbm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "rtprune/error.hpp"

namespace rtprune::io {

namespace {

// Skips whitespace and '#' comments that run to the end of the line.
void skip_separators(std::istream& in) {
    while (true) {
        const int c = in.peek();
        if (c == '#') {
            in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
        } else if (c != std::char_traits<char>::eof() && std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

std::size_t read_header_number(std::istream& in, const char* field) {
    skip_separators(in);
    std::size_t value = 0;
    bool any = false;
    while (std::isdigit(in.peek())) {
        const auto digit = static_cast<std::size_t>(in.get() - '0');
        check(value <= (std::numeric_limits<std::size_t>::max() - digit) / 10, ErrorCode::MalformedFile,
              std::string("netpbm ") + field + " too large");
        value = value * 10 + digit;
        any = true;
    }
    check(any, ErrorCode::MalformedFile, std::string("netpbm header is missing ") + field);
    return value;
}

}  // namespace

NetpbmImage read_netpbm(std::istream& in) {
    char magic[2] = {};
    in.read(magic, 2);
    check(in.gcount() == 2 && magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6'), ErrorCode::MalformedFile,
          "only binary PGM (P5) and PPM (P6) are supported");

    NetpbmImage image;
    image.channels = magic[1] == '5' ? 1 : 3;
    image.width = read_header_number(in, "width");
    image.height = read_header_number(in, "height");
    const std::size_t maxval = read_header_number(in, "maxval");
    check(image.width > 0 && image.height > 0, ErrorCode::MalformedFile, "netpbm image is empty");
    check(maxval == 255, ErrorCode::MalformedFile, "only maxval 255 is supported");
    check(std::isspace(in.get()), ErrorCode::MalformedFile, "missing separator after netpbm header");

    std::size_t count = 0;
    check(!__builtin_mul_overflow(image.width, image.height, &count) &&
              !__builtin_mul_overflow(count, image.channels, &count),
          ErrorCode::MalformedFile, "netpbm dimensions overflow");
    image.samples.resize(count);
    in.read(reinterpret_cast<char*>(image.samples.data()), static_cast<std::streamsize>(count));
    check(static_cast<std::size_t>(in.gcount()) == count, ErrorCode::MalformedFile, "truncated netpbm raster");
    return image;
}

NetpbmImage read_netpbm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    check(in.good(), ErrorCode::MalformedFile, "cannot open image " + path.string());
    return read_netpbm(in);
}

void write_netpbm(std::ostream& out, const NetpbmImage& image) {
    check(image.channels == 1 || image.channels == 3, ErrorCode::InvalidInput, "netpbm needs 1 or 3 channels");
    check(image.samples.size() == image.height * image.width * image.channels, ErrorCode::InvalidInput,
          "netpbm samples do not match dimensions");
    out << (image.channels == 1 ? "P5" : "P6") << '\n' << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.samples.data()), static_cast<std::streamsize>(image.samples.size()));
    check(out.good(), ErrorCode::InvalidInput, "failed to write netpbm image");
}

void write_netpbm(const std::filesystem::path& path, const NetpbmImage& image) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    check(out.good(), ErrorCode::InvalidInput, "cannot open " + path.string() + " for writing");
    write_netpbm(out, image);
}

}  // namespace rtprune::io
