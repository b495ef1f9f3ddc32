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

#ifndef RADARSEG_SYNTHGEN_HPP
#define RADARSEG_SYNTHGEN_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "radarseg/config.hpp"
#include "radarseg/core.hpp"

namespace radarseg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Segment {
    Vec2 a;
    Vec2 b;
};

/// Mirror image of p across the infinite line through s.
Vec2 reflect_across(const Segment& s, Vec2 p) noexcept;

/// Sim object types. The first five generate annotated classes; Unusual
/// covers animals, skaters and the like and yields OtherObject labels.
enum class ObjectKind : std::uint8_t {
    Car,
    Pedestrian,
    PedestrianGroup,
    TwoWheeler,
    LargeVehicle,
    Unusual,
};
constexpr int kNumObjectKinds = 6;

struct SensorMount {
    double x = 0.0;    // vehicle frame, m
    double y = 0.0;
    double yaw = 0.0;  // boresight, rad
};

struct SceneConfig {
    double duration_s = 2.0;
    double cycle_ms = 60.0;
    std::array<int, kNumObjectKinds> n_objects{2, 2, 1, 1, 1, 0};
    double clutter_rate = 2.0;  // false alarms per scan, Poisson mean
    std::vector<Segment> mirror_surfaces;
    int n_poles = 6;
    double sensor_range = 100.0;
    double sensor_fov_deg = 120.0;
    std::array<SensorMount, 4> sensors{{{3.6, 0.8, 45.0 * kPi / 180.0},
                                        {3.8, 0.3, 10.0 * kPi / 180.0},
                                        {3.8, -0.3, -10.0 * kPi / 180.0},
                                        {3.6, -0.8, -45.0 * kPi / 180.0}}};
    double ego_speed = 4.0;     // m/s
    double ego_yaw_rate = 0.0;  // rad/s
    double spawn_radius = 40.0;  // objects and poles are placed within this range
    double position_noise = 0.15;
    double velocity_noise = 0.1;
    double inflation = 0.5;  // tolerance for InaccurateMeasurement
    double ghost_probability = 0.6;
    double ghost_rcs_loss = 8.0;  // dB
    double rcs_spread = 1.0;      // scales the per-class RCS standard deviations
    std::uint64_t rng_seed = 1;

    /// Throws InputError on non-physical values.
    void validate() const;
};

/// Reads SceneConfig keys from a flat key=value config; unknown keys are errors.
SceneConfig scene_config_from(const KeyValueConfig& kv);

struct ObjectState {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double speed = 0.0;
};

struct SimObject {
    int track_id = 0;
    ObjectKind kind = ObjectKind::Car;
    double length = 4.5;
    double width = 1.8;
    ObjectState initial;
    double yaw_rate = 0.0;

    /// Constant-turn-rate trajectory.
    ObjectState state_at(double t_s) const noexcept;
    std::array<Vec2, 4> corners_at(double t_s) const noexcept;
};

/// Signed distance from p to the object's footprint at time t (negative inside).
double footprint_distance(const SimObject& obj, double t_s, Vec2 p) noexcept;

struct SyntheticSequence {
    std::vector<Scan> scans;
    std::vector<SimObject> objects;
};

/// Deterministic in cfg.rng_seed. Scans are time-ordered, fully labeled.
SyntheticSequence generate_sequence(const SceneConfig& cfg);

/// `count` sequences of one scene configuration; sequence i uses seed + i.
std::vector<SyntheticSequence> generate_sequences(const SceneConfig& cfg, int count);

/// Assigns fused/clutter/semseg labels from provenance and footprints.
/// Throws InputError for detections without provenance.
void derive_labels(Scan& scan, std::span<const SimObject> objects, double inflation);

}  // namespace radarseg

#endif  // RADARSEG_SYNTHGEN_HPP
