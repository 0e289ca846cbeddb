// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rtprune/parallel.hpp"

namespace rtprune::density {

namespace {

constexpr double kWeightRed = 0.299;
constexpr double kWeightGreen = 0.587;
constexpr double kWeightBlue = 0.114;

}  // namespace

GrayImage::GrayImage(Matrix<double> values)
    : height(values.rows()),
      width(values.cols()),
      pixels(std::move(values)) {
    check(height > 0 && width > 0, ErrorCode::InvalidInput, "empty image");
    const auto data = pixels.data();
    check(std::all_of(data.begin(), data.end(), [](double v) { return v >= 0.0 && v <= 1.0; }),
          ErrorCode::InvalidInput, "gray intensities must lie in [0, 1]");
}

void DynamicRatioConfig::validate() const {
    check(std::isfinite(tau), ErrorCode::InvalidInput, "tau must be finite");
    check(std::isfinite(phi_lo) && std::isfinite(phi_hi) && phi_lo < phi_hi, ErrorCode::InvalidInput,
          "phi normalization bounds must satisfy phi_lo < phi_hi");
    check(r_min >= 0.0 && r_min <= r_max && r_max < 1.0, ErrorCode::InvalidInput,
          "ratio bounds must satisfy 0 <= r_min <= r_max < 1");
}

GrayImage to_gray(const RgbImage& image) {
    check(image.height > 0 && image.width > 0, ErrorCode::InvalidInput, "empty image");
    check(image.pixels.size() == image.height * image.width * 3, ErrorCode::InvalidInput,
          "RGB buffer does not match image dimensions");
    Matrix<double> gray(image.height, image.width);
    const auto* px = image.pixels.data();
    for (std::size_t i = 0; i < image.height; ++i) {
        for (std::size_t j = 0; j < image.width; ++j, px += 3) {
            const double luma = kWeightRed * px[0] + kWeightGreen * px[1] + kWeightBlue * px[2];
            gray(i, j) = std::clamp(luma / 255.0, 0.0, 1.0);
        }
    }
    return GrayImage(std::move(gray));
}

GrayImage gray_from_bytes(std::size_t height, std::size_t width, const std::vector<std::uint8_t>& samples) {
    check(height > 0 && width > 0, ErrorCode::InvalidInput, "empty image");
    check(samples.size() == height * width, ErrorCode::InvalidInput, "gray buffer does not match image dimensions");
    Matrix<double> gray(height, width);
    std::transform(samples.begin(), samples.end(), gray.data().begin(),
                   [](std::uint8_t s) { return static_cast<double>(s) / 255.0; });
    return GrayImage(std::move(gray));
}

PatchGrid make_grid(std::size_t height, std::size_t width, std::size_t grid_h, std::size_t grid_w) {
    check(grid_h > 0 && grid_w > 0, ErrorCode::InvalidInput, "patch grid must be at least 1x1");
    check(height % grid_h == 0 && width % grid_w == 0, ErrorCode::InvalidInput,
          "image dimensions are not divisible by the patch grid");
    return PatchGrid{grid_h, grid_w, height / grid_h, width / grid_w};
}

GradientMap sobel_magnitude(const GrayImage& image) {
    return sobel_magnitude(image, simd::kernels());
}

GradientMap sobel_magnitude(const GrayImage& image, const simd::KernelTable& kernels) {
    check(image.height >= 3 && image.width >= 3, ErrorCode::InvalidInput, "Sobel needs an image of at least 3x3");
    GradientMap out{Matrix<double>(image.height, image.width, 0.0)};
    parallel_for(image.height - 2, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const std::size_t i = r + 1;
            kernels.sobel_row(image.pixels.row(i - 1).data(), image.pixels.row(i).data(),
                              image.pixels.row(i + 1).data(), image.width, out.magnitude.row(i).data());
        }
    });
    return out;
}

PatchDensityMap patch_density(const GradientMap& gradients, const PatchGrid& grid, double tau) {
    check(std::isfinite(tau), ErrorCode::InvalidInput, "tau must be finite");
    check(grid.patch_h > 0 && grid.patch_w > 0 && grid.grid_h * grid.patch_h == gradients.height() &&
              grid.grid_w * grid.patch_w == gradients.width(),
          ErrorCode::InvalidInput, "patch grid does not tile the gradient map");

    PatchDensityMap out;
    out.tau = tau;
    out.rho_k.assign(grid.patches(), 0.0);
    const double area = static_cast<double>(grid.patch_h * grid.patch_w);
    parallel_for(grid.patches(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t top = (k / grid.grid_w) * grid.patch_h;
            const std::size_t left = (k % grid.grid_w) * grid.patch_w;
            std::size_t active = 0;
            for (std::size_t i = top; i < top + grid.patch_h; ++i) {
                for (std::size_t j = left; j < left + grid.patch_w; ++j) {
                    if (gradients.valid(i, j) && gradients.magnitude(i, j) >= tau) {
                        ++active;
                    }
                }
            }
            out.rho_k[k] = static_cast<double>(active) / area;
        }
    });
    out.rho = std::accumulate(out.rho_k.begin(), out.rho_k.end(), 0.0) / static_cast<double>(grid.patches());
    return out;
}

double dynamic_ratio(double phi, double rho, const DynamicRatioConfig& cfg) {
    cfg.validate();
    check(std::isfinite(phi), ErrorCode::InvalidInput, "phi must be finite");
    check(rho >= 0.0 && rho <= 1.0, ErrorCode::InvalidInput, "rho must lie in [0, 1]");
    const double normalized = std::clamp((phi - cfg.phi_lo) / (cfg.phi_hi - cfg.phi_lo), 0.0, 1.0);
    return std::clamp(normalized * (1.0 - rho), cfg.r_min, cfg.r_max);
}

}  // namespace rtprune::density
