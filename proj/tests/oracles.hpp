// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical code.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace rtprune::testing {

/// Row norms via long-double square-sum-sqrt.
inline std::vector<double> norms_oracle(const std::vector<float>& data, std::size_t n, std::size_t d) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double acc = 0.0L;
        for (std::size_t j = 0; j < d; ++j) {
            const long double v = data[i * d + j];
            acc += v * v;
        }
        out[i] = static_cast<double>(std::sqrt(acc));
    }
    return out;
}

/// Full stable sort by (norm desc, index asc); first m indices, ascending.
inline std::vector<std::size_t> selection_oracle(const std::vector<double>& norms, std::size_t m) {
    std::vector<std::size_t> order(norms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });
    order.resize(m);
    std::sort(order.begin(), order.end());
    return order;
}

/// Direct 3x3 correlation with the two Sobel kernels; border = 0.
inline std::vector<double> sobel_oracle(const std::vector<double>& img, std::size_t h, std::size_t w) {
    static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    static const int ky[3][3] = {{1, 2, 1}, {0, 0, 0}, {-1, -2, -1}};
    std::vector<double> out(h * w, 0.0);
    for (std::size_t i = 1; i + 1 < h; ++i) {
        for (std::size_t j = 1; j + 1 < w; ++j) {
            long double gx = 0.0L;
            long double gy = 0.0L;
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const long double p = img[(i + di) * w + (j + dj)];
                    gx += kx[di + 1][dj + 1] * p;
                    gy += ky[di + 1][dj + 1] * p;
                }
            }
            out[i * w + j] = static_cast<double>(std::sqrt(gx * gx + gy * gy));
        }
    }
    return out;
}

/// Count of interior pixels with G >= tau per patch, over patch area.
inline std::vector<double> density_oracle(const std::vector<double>& g, std::size_t h, std::size_t w,
                                          std::size_t gh, std::size_t gw, double tau) {
    const std::size_t ph = h / gh;
    const std::size_t pw = w / gw;
    std::vector<double> out(gh * gw, 0.0);
    for (std::size_t i = 1; i + 1 < h; ++i) {
        for (std::size_t j = 1; j + 1 < w; ++j) {
            if (g[i * w + j] >= tau) {
                out[(i / ph) * gw + (j / pw)] += 1.0;
            }
        }
    }
    for (auto& v : out) {
        v /= static_cast<double>(ph * pw);
    }
    return out;
}

/// Optimal integral solution of the dustbin transport problem by exhaustive
/// search: every kept row is matched to a distinct pruned column or left to
/// the dustbin; a matched pair (i, j) is worth S(i, j) - z relative to leaving
/// both in the dustbin. Returns, per kept row, the matched column or `cols`
/// for the dustbin.
inline std::vector<std::size_t> dustbin_assignment_oracle(const std::vector<double>& s, std::size_t rows,
                                                          std::size_t cols, double z, double* best_gain = nullptr,
                                                          double* runner_up_gain = nullptr) {
    std::vector<std::size_t> current(rows, cols);
    std::vector<std::size_t> best = current;
    std::vector<bool> used(cols, false);
    double best_value = -std::numeric_limits<double>::infinity();
    double second_value = -std::numeric_limits<double>::infinity();

    auto recurse = [&](auto&& self, std::size_t row, double value) -> void {
        if (row == rows) {
            if (value > best_value) {
                second_value = best_value;
                best_value = value;
                best = current;
            } else if (value > second_value) {
                second_value = value;
            }
            return;
        }
        current[row] = cols;
        self(self, row + 1, value);
        for (std::size_t j = 0; j < cols; ++j) {
            if (used[j]) {
                continue;
            }
            used[j] = true;
            current[row] = j;
            self(self, row + 1, value + s[row * cols + j] - z);
            used[j] = false;
        }
        current[row] = cols;
    };
    recurse(recurse, 0, 0.0);
    if (best_gain) {
        *best_gain = best_value;
    }
    if (runner_up_gain) {
        *runner_up_gain = second_value;
    }
    return best;
}

/// Decoder FLOPs straight from the layer formulas, in 128-bit integers.
struct FlopsOracle {
    std::uint64_t d = 1280, m = 6854, m1 = 896, m2 = 1792, k = 6, t1 = 1, t2 = 11;

    unsigned __int128 attn(std::uint64_t n) const {
        const unsigned __int128 N = n, D = d;
        return 8 * N * D * D + 4 * N * N * D;
    }
    unsigned __int128 layer(std::uint64_t n, std::uint64_t l) const {
        const unsigned __int128 N = n, D = d;
        return attn(n) + (l < t1 ? 6 * N * D * m : 6 * N * D * (k * m1 + m2));
    }
    unsigned __int128 total(std::uint64_t n) const {
        unsigned __int128 sum = 0;
        for (std::uint64_t l = 0; l < t1 + t2; ++l) {
            sum += layer(n, l);
        }
        return sum;
    }
    unsigned __int128 pruned_after(std::uint64_t full, std::uint64_t pruned, std::uint64_t at) const {
        unsigned __int128 sum = 0;
        for (std::uint64_t l = 0; l < t1 + t2; ++l) {
            sum += layer(l <= at ? full : pruned, l);
        }
        return sum;
    }
};

inline std::vector<float> random_floats(std::mt19937_64& rng, std::size_t count, float lo = -1.0f, float hi = 1.0f) {
    std::uniform_real_distribution<float> dist(lo, hi);
    std::vector<float> out(count);
    for (auto& v : out) {
        v = dist(rng);
    }
    return out;
}

}  // namespace rtprune::testing
