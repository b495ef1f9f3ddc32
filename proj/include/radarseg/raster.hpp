/*
 * Copyright 2026 The radarseg Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RADARSEG_RASTER_HPP
#define RADARSEG_RASTER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "radarseg/ingest.hpp"

namespace radarseg {

/// Bird's-eye-view grid geometry. Rows follow x (forward), columns follow y.
struct GridConfig {
    double cell_size = 0.40;
    int rows = 512;  // along x
    int cols = 512;  // along y
    double x_min = -95.2;
    double y_min = -102.4;

    double x_max() const noexcept { return x_min + rows * cell_size; }
    double y_max() const noexcept { return y_min + cols * cell_size; }
    int cells() const noexcept { return rows * cols; }

    /// Square grid of n cells per side with the ego row offset scaled from
    /// the 512-cell layout (238 of 512 rows behind the vehicle).
    static GridConfig square(int n, double cell_size);

    void validate() const;
};

/// Per-cell feature channels, in storage order.
enum Channel : int { kChanX = 0, kChanY, kChanRcs, kChanVx, kChanVy, kNumChannels };

/// Rasterized window. Features are row-major rows x cols x 5.
struct GridMap {
    GridConfig config;
    std::vector<float> features;
    // CSR cell -> detection indices into the source window.
    std::vector<std::int32_t> cell_start;  // size cells + 1
    std::vector<std::int32_t> cell_points;
    // Detection -> cell (flat index) or -1 when outside the extent.
    std::vector<std::int32_t> point_cell;
    std::vector<std::uint8_t> latest_mask;
    std::vector<std::int32_t> dropped;

    int rows() const noexcept { return config.rows; }
    int cols() const noexcept { return config.cols; }
    std::span<const std::int32_t> points_in(int cell) const noexcept {
        return {cell_points.data() + cell_start[cell],
                static_cast<std::size_t>(cell_start[cell + 1] - cell_start[cell])};
    }
    bool occupied(int cell) const noexcept { return cell_start[cell + 1] > cell_start[cell]; }
};

/// Flat cell index for a vehicle-frame position, or -1 outside the extent.
int cell_of(const GridConfig& cfg, double x, double y) noexcept;

/// Per-cell, per-channel maximum of the window's features. Empty cells are 0.
GridMap rasterize(const PointCloudWindow& window, const GridConfig& cfg);

constexpr int kOutOfMap = -1;

/// Copies each cell's class to the detections it holds. Dropped detections
/// get kOutOfMap. `cell_classes` must have rows*cols entries.
std::vector<int> scatter_back(std::span<const int> cell_classes, const GridMap& grid);

/// Clears features and occupancy of the masked cells. Detections in masked
/// cells become kOutOfMap on scatter_back.
GridMap zero_cells(const GridMap& grid, std::span<const std::uint8_t> mask);

}  // namespace radarseg

#endif  // RADARSEG_RASTER_HPP
