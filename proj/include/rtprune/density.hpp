// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rtprune/matrix.hpp"
#include "rtprune/simd/kernels.hpp"

namespace rtprune::density {

/// Interleaved 8-bit RGB, row-major.
struct RgbImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> pixels;  ///< height * width * 3
};

/// Intensities in [0, 1].
struct GrayImage {
    std::size_t height = 0;
    std::size_t width = 0;
    Matrix<double> pixels;

    GrayImage() = default;
    explicit GrayImage(Matrix<double> values);
};

/// Token-aligned tiling of an image: grid_h x grid_w patches of patch_h x patch_w pixels.
struct PatchGrid {
    std::size_t grid_h = 0;
    std::size_t grid_w = 0;
    std::size_t patch_h = 0;
    std::size_t patch_w = 0;

    std::size_t patches() const { return grid_h * grid_w; }
};

/// Sobel magnitudes; the one-pixel border carries no gradient and is invalid.
struct GradientMap {
    Matrix<double> magnitude;

    std::size_t height() const { return magnitude.rows(); }
    std::size_t width() const { return magnitude.cols(); }
    bool valid(std::size_t i, std::size_t j) const {
        return i > 0 && j > 0 && i + 1 < height() && j + 1 < width();
    }
};

struct PatchDensityMap {
    std::vector<double> rho_k;  ///< per patch, raster order
    double rho = 0.0;           ///< mean of rho_k
    double tau = 0.0;
};

struct DynamicRatioConfig {
    double tau = 0.2;
    double phi_lo = 0.0;
    double phi_hi = 1.0;
    double r_min = 0.0;
    double r_max = 0.5;

    void validate() const;
};

/// BT.601 luma of each pixel, scaled to [0, 1].
GrayImage to_gray(const RgbImage& image);

/// 8-bit single-channel samples scaled to [0, 1].
GrayImage gray_from_bytes(std::size_t height, std::size_t width, const std::vector<std::uint8_t>& samples);

/// Divides an image into grid_h x grid_w equal patches. Throws InvalidInput
/// unless both image dimensions divide evenly.
PatchGrid make_grid(std::size_t height, std::size_t width, std::size_t grid_h, std::size_t grid_w);

GradientMap sobel_magnitude(const GrayImage& image);
GradientMap sobel_magnitude(const GrayImage& image, const simd::KernelTable& kernels);

/// rho_k = (#valid pixels of patch k with G >= tau) / (patch_h * patch_w).
PatchDensityMap patch_density(const GradientMap& gradients, const PatchGrid& grid, double tau);

/// clamp(normalize(phi) * (1 - rho), r_min, r_max), where normalize maps
/// [phi_lo, phi_hi] affinely onto [0, 1] and clamps.
double dynamic_ratio(double phi, double rho, const DynamicRatioConfig& cfg);

}  // namespace rtprune::density
