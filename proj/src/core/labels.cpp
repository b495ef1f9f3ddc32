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

#include "radarseg/core.hpp"

#include <cmath>

namespace radarseg {

namespace {

constexpr std::array<std::string_view, kNumClutterLabels> kClutterNames{
    "MovingObject", "Clutter", "Stationary"};

constexpr std::array<std::string_view, kNumSemSegLabels> kSemSegNames{
    "Car", "Pedestrian", "PedestrianGroup", "TwoWheeler",
    "LargeVehicle", "Background", "Unlabeled"};

constexpr std::array<std::string_view, kNumFusedLabels> kFusedNames{
    "Car",         "Pedestrian",            "PedestrianGroup",
    "TwoWheeler",  "LargeVehicle",          "OtherObject",
    "InaccurateMeasurement", "Clutter",     "Stationary"};

template <typename Label, std::size_t N>
std::optional<Label> parse_from(const std::array<std::string_view, N>& names,
                                std::string_view name) noexcept {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == name) return static_cast<Label>(i);
    }
    return std::nullopt;
}

}  // namespace

std::optional<FusedLabel> fuse_labels(ClutterLabel c, SemSegLabel s) noexcept {
    for (FusedLabel f : kAllFusedLabels) {
        if (fused_to_clutter(f) == c && fused_to_semseg(f) == s) return f;
    }
    return std::nullopt;
}

std::string_view to_string(ClutterLabel l) noexcept {
    return kClutterNames[static_cast<std::size_t>(l)];
}
std::string_view to_string(SemSegLabel l) noexcept {
    return kSemSegNames[static_cast<std::size_t>(l)];
}
std::string_view to_string(FusedLabel l) noexcept {
    return kFusedNames[static_cast<std::size_t>(l)];
}

std::optional<ClutterLabel> parse_clutter_label(std::string_view name) noexcept {
    return parse_from<ClutterLabel>(kClutterNames, name);
}
std::optional<SemSegLabel> parse_semseg_label(std::string_view name) noexcept {
    return parse_from<SemSegLabel>(kSemSegNames, name);
}
std::optional<FusedLabel> parse_fused_label(std::string_view name) noexcept {
    return parse_from<FusedLabel>(kFusedNames, name);
}

bool is_valid(const Detection& d) noexcept {
    for (double v : {d.x_world, d.y_world, d.vx_comp, d.vy_comp, d.rcs}) {
        if (!std::isfinite(v)) return false;
    }
    if (d.sensor_id < 0 || d.sensor_id > 3) return false;
    if (d.fused_label) {
        if (d.clutter_label && *d.clutter_label != fused_to_clutter(*d.fused_label)) return false;
        if (d.semseg_label && *d.semseg_label != fused_to_semseg(*d.fused_label)) return false;
    }
    return true;
}

double wrap_angle(double a) noexcept {
    if (a >= -kPi && a < kPi) return a;
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a - kPi;
}

}  // namespace radarseg
