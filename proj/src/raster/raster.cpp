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

#include "radarseg/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace radarseg {

GridConfig GridConfig::square(int n, double cell_size) {
    GridConfig cfg;
    cfg.cell_size = cell_size;
    cfg.rows = n;
    cfg.cols = n;
    const int behind = static_cast<int>(std::lround(n * 238.0 / 512.0));
    cfg.x_min = -behind * cell_size;
    cfg.y_min = -0.5 * n * cell_size;
    return cfg;
}

void GridConfig::validate() const {
    if (!(cell_size > 0.0)) throw InputError("cell size must be > 0");
    if (rows <= 0 || cols <= 0) throw InputError("grid must have at least one cell");
}

int cell_of(const GridConfig& cfg, double x, double y) noexcept {
    const double fx = std::floor((x - cfg.x_min) / cfg.cell_size);
    const double fy = std::floor((y - cfg.y_min) / cfg.cell_size);
    if (!(fx >= 0.0 && fx < cfg.rows && fy >= 0.0 && fy < cfg.cols)) return -1;
    return static_cast<int>(fx) * cfg.cols + static_cast<int>(fy);
}

GridMap rasterize(const PointCloudWindow& window, const GridConfig& cfg) {
    cfg.validate();
    GridMap g;
    g.config = cfg;
    const int cells = cfg.cells();
    const auto n = static_cast<std::int32_t>(window.points.size());
    g.features.assign(static_cast<std::size_t>(cells) * kNumChannels, 0.0f);
    g.latest_mask.assign(cells, 0);
    g.point_cell.assign(n, -1);
    g.cell_start.assign(cells + 1, 0);

    for (std::int32_t i = 0; i < n; ++i) {
        const WindowPoint& p = window.points[i];
        const int c = cell_of(cfg, p.x_vehicle, p.y_vehicle);
        g.point_cell[i] = c;
        if (c < 0) {
            g.dropped.push_back(i);
            continue;
        }
        ++g.cell_start[c + 1];
    }
    for (int c = 0; c < cells; ++c) g.cell_start[c + 1] += g.cell_start[c];
    g.cell_points.resize(g.cell_start[cells]);
    std::vector<std::int32_t> fill(g.cell_start.begin(), g.cell_start.end() - 1);
    for (std::int32_t i = 0; i < n; ++i) {
        if (g.point_cell[i] >= 0) g.cell_points[fill[g.point_cell[i]]++] = i;
    }

    constexpr float kLowest = std::numeric_limits<float>::lowest();
    for (int c = 0; c < cells; ++c) {
        if (!g.occupied(c)) continue;
        float* f = &g.features[static_cast<std::size_t>(c) * kNumChannels];
        std::fill(f, f + kNumChannels, kLowest);
        for (std::int32_t i : g.points_in(c)) {
            const WindowPoint& p = window.points[i];
            f[kChanX] = std::max(f[kChanX], static_cast<float>(p.x_vehicle));
            f[kChanY] = std::max(f[kChanY], static_cast<float>(p.y_vehicle));
            f[kChanRcs] = std::max(f[kChanRcs], static_cast<float>(p.detection.rcs));
            f[kChanVx] = std::max(f[kChanVx], static_cast<float>(p.vx_vehicle));
            f[kChanVy] = std::max(f[kChanVy], static_cast<float>(p.vy_vehicle));
            if (p.is_latest_scan) g.latest_mask[c] = 1;
        }
    }
    return g;
}

std::vector<int> scatter_back(std::span<const int> cell_classes, const GridMap& grid) {
    if (cell_classes.size() != static_cast<std::size_t>(grid.config.cells()))
        throw ShapeError("prediction has " + std::to_string(cell_classes.size()) + " cells, grid has " +
                         std::to_string(grid.config.cells()));
    std::vector<int> out(grid.point_cell.size(), kOutOfMap);
    const int cells = grid.config.cells();
    for (int c = 0; c < cells; ++c) {
        for (std::int32_t i : grid.points_in(c)) out[i] = cell_classes[c];
    }
    return out;
}

GridMap zero_cells(const GridMap& grid, std::span<const std::uint8_t> mask) {
    const int cells = grid.config.cells();
    if (mask.size() != static_cast<std::size_t>(cells))
        throw ShapeError("mask has " + std::to_string(mask.size()) + " cells, grid has " + std::to_string(cells));
    GridMap g;
    g.config = grid.config;
    g.features = grid.features;
    g.latest_mask = grid.latest_mask;
    g.point_cell = grid.point_cell;
    g.dropped = grid.dropped;
    g.cell_start.assign(cells + 1, 0);
    g.cell_points.reserve(grid.cell_points.size());
    for (int c = 0; c < cells; ++c) {
        if (mask[c]) {
            std::fill_n(&g.features[static_cast<std::size_t>(c) * kNumChannels], kNumChannels, 0.0f);
            g.latest_mask[c] = 0;
            for (std::int32_t i : grid.points_in(c)) g.point_cell[i] = -1;
        } else {
            const auto pts = grid.points_in(c);
            g.cell_points.insert(g.cell_points.end(), pts.begin(), pts.end());
        }
        g.cell_start[c + 1] = static_cast<std::int32_t>(g.cell_points.size());
    }
    return g;
}

}  // namespace radarseg
