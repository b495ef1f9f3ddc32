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

#include "radarseg/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace radarseg {

using nlohmann::json;

ParseError::ParseError(std::size_t line, const std::string& what)
    : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

void world_to_vehicle(const EgoPose& pose, double xw, double yw, double& xv, double& yv) noexcept {
    const double dx = xw - pose.x;
    const double dy = yw - pose.y;
    const double c = std::cos(pose.yaw);
    const double s = std::sin(pose.yaw);
    xv = c * dx + s * dy;
    yv = -s * dx + c * dy;
}

namespace {

void append_scan(PointCloudWindow& w, const Scan& scan, bool latest) {
    const double c = std::cos(w.reference_pose.yaw);
    const double s = std::sin(w.reference_pose.yaw);
    for (const Detection& d : scan.detections) {
        if (d.timestamp <= w.t_now - kWindowLength || d.timestamp > w.t_now) continue;
        WindowPoint p;
        p.detection = d;
        world_to_vehicle(w.reference_pose, d.x_world, d.y_world, p.x_vehicle, p.y_vehicle);
        p.vx_vehicle = c * d.vx_comp + s * d.vy_comp;
        p.vy_vehicle = -s * d.vx_comp + c * d.vy_comp;
        p.is_latest_scan = latest;
        w.points.push_back(std::move(p));
    }
}

}  // namespace

PointCloudWindow accumulate_window(std::span<const Scan> history, const Scan& trigger) {
    PointCloudWindow w;
    w.reference_pose = trigger.ego_pose;
    w.t_now = trigger.timestamp;
    w.trigger_sensor = trigger.sensor_id;
    for (const Scan& scan : history) {
        if (&scan == &trigger) continue;
        append_scan(w, scan, false);
    }
    append_scan(w, trigger, true);
    return w;
}

std::vector<PointCloudWindow> windows_from_sequence(std::span<const Scan> scans) {
    std::vector<PointCloudWindow> out;
    out.reserve(scans.size());
    std::size_t first = 0;
    for (std::size_t i = 0; i < scans.size(); ++i) {
        const Timestamp t = scans[i].timestamp;
        while (first < i && scans[first].timestamp <= t - kWindowLength) ++first;
        out.push_back(accumulate_window(scans.subspan(first, i - first), scans[i]));
    }
    return out;
}

namespace {

template <typename T>
T require(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(line, std::string("missing field '") + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ParseError(line, std::string("field '") + key + "' has the wrong type");
    }
}

Scan parse_scan(const std::string& text, std::size_t line) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(line, "scan record must be a JSON object");

    Scan scan;
    scan.timestamp = require<std::int64_t>(j, "t_us", line);
    scan.sensor_id = require<int>(j, "sensor", line);
    if (scan.sensor_id < 0 || scan.sensor_id > 3) throw ParseError(line, "sensor must be in 0..3");
    const json ego = require<json>(j, "ego", line);
    if (!ego.is_object()) throw ParseError(line, "field 'ego' must be an object");
    scan.ego_pose.x = require<double>(ego, "x", line);
    scan.ego_pose.y = require<double>(ego, "y", line);
    scan.ego_pose.yaw = wrap_angle(require<double>(ego, "yaw", line));
    scan.ego_pose.timestamp = scan.timestamp;

    const json dets = require<json>(j, "dets", line);
    if (!dets.is_array()) throw ParseError(line, "field 'dets' must be an array");
    scan.detections.reserve(dets.size());
    for (const json& dj : dets) {
        if (!dj.is_object()) throw ParseError(line, "detection must be an object");
        Detection d;
        d.x_world = require<double>(dj, "x", line);
        d.y_world = require<double>(dj, "y", line);
        d.vx_comp = require<double>(dj, "vx", line);
        d.vy_comp = require<double>(dj, "vy", line);
        d.rcs = require<double>(dj, "rcs", line);
        d.timestamp = scan.timestamp;
        d.sensor_id = scan.sensor_id;
        if (auto it = dj.find("track"); it != dj.end() && !it->is_null()) {
            if (!it->is_number_integer()) throw ParseError(line, "field 'track' must be int or null");
            d.track_id = it->get<int>();
        }
        if (auto it = dj.find("fused"); it != dj.end() && !it->is_null()) {
            if (!it->is_string()) throw ParseError(line, "field 'fused' must be a string or null");
            const auto label = parse_fused_label(it->get<std::string>());
            if (!label) throw ParseError(line, "unknown fused label '" + it->get<std::string>() + "'");
            d.set_fused(*label);
        }
        if (!is_valid(d)) throw ParseError(line, "detection has non-finite values");
        scan.detections.push_back(std::move(d));
    }
    return scan;
}

}  // namespace

std::vector<Scan> read_scan_stream(std::istream& in) {
    std::vector<Scan> scans;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); }))
            continue;
        Scan scan = parse_scan(text, line);
        if (!scans.empty() && scan.timestamp < scans.back().timestamp) {
            throw OrderingError("line " + std::to_string(line) + ": timestamp " +
                                std::to_string(scan.timestamp) + " precedes " +
                                std::to_string(scans.back().timestamp));
        }
        scans.push_back(std::move(scan));
    }
    return scans;
}

std::vector<Scan> load_scan_stream(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scan stream " + path.string());
    return read_scan_stream(in);
}

void write_scan_stream(std::ostream& out, std::span<const Scan> scans) {
    for (const Scan& scan : scans) {
        json dets = json::array();
        for (const Detection& d : scan.detections) {
            json dj;
            dj["x"] = d.x_world;
            dj["y"] = d.y_world;
            dj["vx"] = d.vx_comp;
            dj["vy"] = d.vy_comp;
            dj["rcs"] = d.rcs;
            dj["track"] = d.track_id ? json(*d.track_id) : json(nullptr);
            dj["fused"] = d.fused_label ? json(std::string(to_string(*d.fused_label))) : json(nullptr);
            dets.push_back(std::move(dj));
        }
        json j;
        j["t_us"] = scan.timestamp;
        j["sensor"] = scan.sensor_id;
        j["ego"] = {{"x", scan.ego_pose.x}, {"y", scan.ego_pose.y}, {"yaw", scan.ego_pose.yaw}};
        j["dets"] = std::move(dets);
        out << j.dump() << '\n';
    }
}

void save_scan_stream(const std::filesystem::path& path, std::span<const Scan> scans) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    write_scan_stream(out, scans);
}

std::vector<std::filesystem::path> dataset_files(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (fs::is_regular_file(path)) return {path};
    if (!fs::is_directory(path)) throw InputError("dataset not found: " + path.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError("no .jsonl sequences in " + path.string());
    return files;
}

std::vector<std::vector<Scan>> load_dataset(const std::filesystem::path& path) {
    std::vector<std::vector<Scan>> out;
    for (const auto& file : dataset_files(path)) out.push_back(load_scan_stream(file));
    return out;
}

}  // namespace radarseg
