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

#ifndef RADARSEG_CORE_HPP
#define RADARSEG_CORE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace radarseg {

/// Errors raised for malformed user input (files, configs, flags).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tensor or grid dimensions that do not agree.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Timestamp = std::int64_t;  // microseconds

constexpr double kPi = 3.14159265358979323846;

enum class ClutterLabel : std::uint8_t { MovingObject, Clutter, Stationary };

enum class SemSegLabel : std::uint8_t {
    Car,
    Pedestrian,
    PedestrianGroup,
    TwoWheeler,
    LargeVehicle,
    Background,
    Unlabeled,  // never scored, never trained on
};

enum class FusedLabel : std::uint8_t {
    Car,
    Pedestrian,
    PedestrianGroup,
    TwoWheeler,
    LargeVehicle,
    OtherObject,
    InaccurateMeasurement,
    Clutter,
    Stationary,
};

constexpr int kNumClutterLabels = 3;
constexpr int kNumSemSegLabels = 7;  // including Unlabeled
constexpr int kNumFusedLabels = 9;

/// The five annotated road-user types shared by SemSegLabel and FusedLabel.
constexpr int kNumObjectClasses = 5;

constexpr std::array<ClutterLabel, kNumClutterLabels> kAllClutterLabels{
    ClutterLabel::MovingObject, ClutterLabel::Clutter, ClutterLabel::Stationary};

constexpr std::array<SemSegLabel, kNumSemSegLabels> kAllSemSegLabels{
    SemSegLabel::Car,          SemSegLabel::Pedestrian, SemSegLabel::PedestrianGroup,
    SemSegLabel::TwoWheeler,   SemSegLabel::LargeVehicle, SemSegLabel::Background,
    SemSegLabel::Unlabeled};

constexpr std::array<FusedLabel, kNumFusedLabels> kAllFusedLabels{
    FusedLabel::Car,         FusedLabel::Pedestrian,
    FusedLabel::PedestrianGroup, FusedLabel::TwoWheeler,
    FusedLabel::LargeVehicle, FusedLabel::OtherObject,
    FusedLabel::InaccurateMeasurement, FusedLabel::Clutter,
    FusedLabel::Stationary};

constexpr ClutterLabel fused_to_clutter(FusedLabel f) noexcept {
    switch (f) {
        case FusedLabel::Clutter:
            return ClutterLabel::Clutter;
        case FusedLabel::Stationary:
            return ClutterLabel::Stationary;
        default:
            return ClutterLabel::MovingObject;
    }
}

constexpr SemSegLabel fused_to_semseg(FusedLabel f) noexcept {
    switch (f) {
        case FusedLabel::Car:
            return SemSegLabel::Car;
        case FusedLabel::Pedestrian:
            return SemSegLabel::Pedestrian;
        case FusedLabel::PedestrianGroup:
            return SemSegLabel::PedestrianGroup;
        case FusedLabel::TwoWheeler:
            return SemSegLabel::TwoWheeler;
        case FusedLabel::LargeVehicle:
            return SemSegLabel::LargeVehicle;
        case FusedLabel::OtherObject:
            return SemSegLabel::Unlabeled;
        case FusedLabel::InaccurateMeasurement:
        case FusedLabel::Clutter:
        case FusedLabel::Stationary:
            return SemSegLabel::Background;
    }
    return SemSegLabel::Background;
}

/// True for the five road-user classes.
constexpr bool is_object_class(SemSegLabel s) noexcept {
    return static_cast<int>(s) < kNumObjectClasses;
}

/// Inverse of the two mappings: the unique fused label for a valid task pair.
/// Pairs eliminated by construction, e.g. (Clutter, Car), yield nullopt.
std::optional<FusedLabel> fuse_labels(ClutterLabel c, SemSegLabel s) noexcept;

std::string_view to_string(ClutterLabel l) noexcept;
std::string_view to_string(SemSegLabel l) noexcept;
std::string_view to_string(FusedLabel l) noexcept;

std::optional<ClutterLabel> parse_clutter_label(std::string_view name) noexcept;
std::optional<SemSegLabel> parse_semseg_label(std::string_view name) noexcept;
std::optional<FusedLabel> parse_fused_label(std::string_view name) noexcept;

/// Where a synthetic detection came from. Only the label generator reads it.
enum class Provenance : std::uint8_t { Unknown, Object, Environment, Ghost, FalseAlarm };

struct Detection {
    double x_world = 0.0;  // m
    double y_world = 0.0;  // m
    double vx_comp = 0.0;  // m/s, ego-motion compensated, world frame
    double vy_comp = 0.0;
    double rcs = 0.0;  // dBsm
    Timestamp timestamp = 0;
    int sensor_id = 0;
    std::optional<int> track_id;
    std::optional<ClutterLabel> clutter_label;
    std::optional<SemSegLabel> semseg_label;
    std::optional<FusedLabel> fused_label;
    Provenance provenance = Provenance::Unknown;

    /// Sets all three labels from a fused label.
    void set_fused(FusedLabel f) noexcept {
        fused_label = f;
        clutter_label = fused_to_clutter(f);
        semseg_label = fused_to_semseg(f);
    }
};

/// Checks the Detection invariants (finite values, label consistency).
bool is_valid(const Detection& d) noexcept;

struct EgoPose {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;  // [-pi, pi)
    Timestamp timestamp = 0;
};

/// Wraps an angle into [-pi, pi).
double wrap_angle(double a) noexcept;

struct Scan {
    int sensor_id = 0;
    Timestamp timestamp = 0;
    std::vector<Detection> detections;
    EgoPose ego_pose;
};

}  // namespace radarseg

#endif  // RADARSEG_CORE_HPP
