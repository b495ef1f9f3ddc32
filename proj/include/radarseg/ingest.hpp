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

#ifndef RADARSEG_INGEST_HPP
#define RADARSEG_INGEST_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "radarseg/core.hpp"

namespace radarseg {

/// Malformed scan record. The message names the offending line.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A scan stream whose timestamps go backwards.
class OrderingError : public InputError {
public:
    using InputError::InputError;
};

constexpr Timestamp kWindowLength = 150'000;  // us

struct WindowPoint {
    Detection detection;
    double x_vehicle = 0.0;
    double y_vehicle = 0.0;
    // Compensated velocity rotated into the vehicle frame.
    double vx_vehicle = 0.0;
    double vy_vehicle = 0.0;
    bool is_latest_scan = false;
};

/// All detections of the last 150 ms, expressed in the trigger's vehicle frame.
struct PointCloudWindow {
    std::vector<WindowPoint> points;
    EgoPose reference_pose;
    Timestamp t_now = 0;
    int trigger_sensor = 0;
};

/// World -> vehicle frame: rotate(-yaw) * (p - position).
void world_to_vehicle(const EgoPose& pose, double xw, double yw, double& xv, double& yv) noexcept;

/// Builds the window for `trigger`. `history` holds earlier scans (any order,
/// any sensor); the half-open interval (t_now - 150 ms, t_now] selects
/// detections, and only the trigger's detections are flagged latest.
PointCloudWindow accumulate_window(std::span<const Scan> history, const Scan& trigger);

/// One window per scan of a time-ordered sequence.
std::vector<PointCloudWindow> windows_from_sequence(std::span<const Scan> scans);

std::vector<Scan> read_scan_stream(std::istream& in);
std::vector<Scan> load_scan_stream(const std::filesystem::path& path);

/// One JSONL line per scan. Labels are written as fused names.
void write_scan_stream(std::ostream& out, std::span<const Scan> scans);
void save_scan_stream(const std::filesystem::path& path, std::span<const Scan> scans);

/// A dataset is either a single .jsonl file or a directory of them; each file
/// is one independent sequence. Files are returned in lexicographic order.
std::vector<std::filesystem::path> dataset_files(const std::filesystem::path& path);
std::vector<std::vector<Scan>> load_dataset(const std::filesystem::path& path);

}  // namespace radarseg

#endif  // RADARSEG_INGEST_HPP
