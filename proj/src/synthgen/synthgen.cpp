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

#include "radarseg/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace radarseg {

Vec2 reflect_across(const Segment& s, Vec2 p) noexcept {
    const double dx = s.b.x - s.a.x;
    const double dy = s.b.y - s.a.y;
    const double len2 = dx * dx + dy * dy;
    const double t = ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2;
    const Vec2 foot{s.a.x + t * dx, s.a.y + t * dy};
    return {2.0 * foot.x - p.x, 2.0 * foot.y - p.y};
}

void SceneConfig::validate() const {
    if (!(duration_s >= 0.0)) throw InputError("duration must be >= 0");
    if (!(cycle_ms > 0.0)) throw InputError("cycle must be > 0");
    for (int n : n_objects)
        if (n < 0) throw InputError("object counts must be >= 0");
    if (!(clutter_rate >= 0.0)) throw InputError("clutter_rate must be >= 0");
    if (!(sensor_range > 0.0)) throw InputError("sensor_range must be > 0");
    if (!(sensor_fov_deg > 0.0 && sensor_fov_deg <= 360.0)) throw InputError("sensor_fov must be in (0, 360]");
    if (!(position_noise >= 0.0) || !(velocity_noise >= 0.0)) throw InputError("noise must be >= 0");
    if (!(inflation >= 0.0)) throw InputError("inflation must be >= 0");
    if (!(ghost_probability >= 0.0 && ghost_probability <= 1.0))
        throw InputError("ghost_probability must be in [0, 1]");
    if (n_poles < 0) throw InputError("n_poles must be >= 0");
    if (!(rcs_spread >= 0.0)) throw InputError("rcs_spread must be >= 0");
    for (const Segment& s : mirror_surfaces) {
        if (s.a.x == s.b.x && s.a.y == s.b.y) throw InputError("mirror surface has zero length");
    }
}

SceneConfig scene_config_from(const KeyValueConfig& kv) {
    SceneConfig cfg;
    if (auto v = kv.get_double("duration")) cfg.duration_s = *v;
    if (auto v = kv.get_double("cycle_ms")) cfg.cycle_ms = *v;
    static const char* kObjectKeys[kNumObjectKinds] = {"n_car",          "n_pedestrian",
                                                       "n_pedestrian_group", "n_two_wheeler",
                                                       "n_large_vehicle", "n_unusual"};
    for (int k = 0; k < kNumObjectKinds; ++k) {
        if (auto v = kv.get_int(kObjectKeys[k])) cfg.n_objects[k] = static_cast<int>(*v);
    }
    if (auto v = kv.get_double("clutter_rate")) cfg.clutter_rate = *v;
    if (auto v = kv.get_doubles("mirror_surfaces")) {
        if (v->size() % 4 != 0) throw InputError("mirror_surfaces needs groups of x1,y1,x2,y2");
        cfg.mirror_surfaces.clear();
        for (std::size_t i = 0; i < v->size(); i += 4)
            cfg.mirror_surfaces.push_back({{(*v)[i], (*v)[i + 1]}, {(*v)[i + 2], (*v)[i + 3]}});
    }
    if (auto v = kv.get_int("n_poles")) cfg.n_poles = static_cast<int>(*v);
    if (auto v = kv.get_double("sensor_range")) cfg.sensor_range = *v;
    if (auto v = kv.get_double("sensor_fov_deg")) cfg.sensor_fov_deg = *v;
    if (auto v = kv.get_doubles("sensor_yaw_deg")) {
        if (v->size() != 4) throw InputError("sensor_yaw_deg needs 4 values");
        for (int i = 0; i < 4; ++i) cfg.sensors[i].yaw = (*v)[i] * kPi / 180.0;
    }
    if (auto v = kv.get_double("ego_speed")) cfg.ego_speed = *v;
    if (auto v = kv.get_double("ego_yaw_rate")) cfg.ego_yaw_rate = *v;
    if (auto v = kv.get_double("spawn_radius")) cfg.spawn_radius = *v;
    if (auto v = kv.get_double("position_noise")) cfg.position_noise = *v;
    if (auto v = kv.get_double("velocity_noise")) cfg.velocity_noise = *v;
    if (auto v = kv.get_double("inflation")) cfg.inflation = *v;
    if (auto v = kv.get_double("ghost_probability")) cfg.ghost_probability = *v;
    if (auto v = kv.get_double("ghost_rcs_loss")) cfg.ghost_rcs_loss = *v;
    if (auto v = kv.get_double("rcs_spread")) cfg.rcs_spread = *v;
    if (auto v = kv.get_int("seed")) cfg.rng_seed = static_cast<std::uint64_t>(*v);
    cfg.validate();
    return cfg;
}

ObjectState SimObject::state_at(double t_s) const noexcept {
    ObjectState s = initial;
    if (std::abs(yaw_rate) < 1e-12) {
        s.x += std::cos(initial.heading) * initial.speed * t_s;
        s.y += std::sin(initial.heading) * initial.speed * t_s;
    } else {
        const double h1 = initial.heading + yaw_rate * t_s;
        const double r = initial.speed / yaw_rate;
        s.x += r * (std::sin(h1) - std::sin(initial.heading));
        s.y += r * (std::cos(initial.heading) - std::cos(h1));
        s.heading = h1;
    }
    return s;
}

std::array<Vec2, 4> SimObject::corners_at(double t_s) const noexcept {
    const ObjectState s = state_at(t_s);
    const double c = std::cos(s.heading);
    const double sn = std::sin(s.heading);
    const double hl = 0.5 * length;
    const double hw = 0.5 * width;
    auto at = [&](double u, double v) { return Vec2{s.x + c * u - sn * v, s.y + sn * u + c * v}; };
    return {at(hl, hw), at(-hl, hw), at(-hl, -hw), at(hl, -hw)};
}

double footprint_distance(const SimObject& obj, double t_s, Vec2 p) noexcept {
    const ObjectState s = obj.state_at(t_s);
    const double c = std::cos(s.heading);
    const double sn = std::sin(s.heading);
    const double dx = p.x - s.x;
    const double dy = p.y - s.y;
    // Box-local coordinates.
    const double u = std::abs(c * dx + sn * dy) - 0.5 * obj.length;
    const double v = std::abs(-sn * dx + c * dy) - 0.5 * obj.width;
    if (u <= 0.0 && v <= 0.0) return std::max(u, v);
    return std::hypot(std::max(u, 0.0), std::max(v, 0.0));
}

std::vector<SyntheticSequence> generate_sequences(const SceneConfig& cfg, int count) {
    if (count < 0) throw InputError("sequence count must be >= 0");
    std::vector<SyntheticSequence> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        SceneConfig c = cfg;
        c.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(i);
        out.push_back(generate_sequence(c));
    }
    return out;
}

void derive_labels(Scan& scan, std::span<const SimObject> objects, double inflation) {
    const double t_s = static_cast<double>(scan.timestamp) * 1e-6;
    for (Detection& d : scan.detections) {
        switch (d.provenance) {
            case Provenance::Object: {
                if (!d.track_id) throw InputError("object detection without track id");
                auto it = std::find_if(objects.begin(), objects.end(),
                                       [&](const SimObject& o) { return o.track_id == *d.track_id; });
                if (it == objects.end())
                    throw InputError("detection references unknown track " + std::to_string(*d.track_id));
                const double dist = footprint_distance(*it, t_s, {d.x_world, d.y_world});
                if (dist <= 0.0) {
                    d.set_fused(it->kind == ObjectKind::Unusual ? FusedLabel::OtherObject
                                                                : static_cast<FusedLabel>(it->kind));
                } else if (dist <= inflation) {
                    d.set_fused(FusedLabel::InaccurateMeasurement);
                } else {
                    d.set_fused(FusedLabel::Clutter);
                }
                break;
            }
            case Provenance::Environment:
                d.set_fused(FusedLabel::Stationary);
                break;
            case Provenance::Ghost:
            case Provenance::FalseAlarm:
                d.set_fused(FusedLabel::Clutter);
                break;
            case Provenance::Unknown:
                throw InputError("detection without provenance cannot be labeled");
        }
    }
}

namespace {

struct KindProfile {
    double length, width;
    double speed_mean, speed_sd;
    double rcs_mean, rcs_sd;
    double points_mean;  // extra points per visible scan on top of one
};

// Per-kind footprint, speed and RCS. Chosen to be separable in combination
// but overlapping in each single feature.
constexpr std::array<KindProfile, kNumObjectKinds> kProfiles{{
    {4.5, 1.9, 8.0, 2.0, 10.0, 3.0, 3.0},   // car
    {0.7, 0.7, 1.4, 0.3, -4.0, 2.0, 0.3},   // pedestrian
    {1.8, 1.8, 1.1, 0.2, 0.0, 2.0, 1.5},    // pedestrian group
    {2.0, 0.8, 5.0, 1.0, 3.0, 2.0, 1.0},    // two-wheeler
    {11.0, 2.6, 6.5, 1.5, 17.0, 3.0, 5.0},  // large vehicle
    {1.2, 0.6, 3.0, 1.0, -1.0, 2.5, 0.5},   // unusual
}};

struct SensorPose {
    Vec2 pos;
    double yaw;
};

class Generator {
public:
    explicit Generator(const SceneConfig& cfg) : cfg_(cfg), rng_(cfg.rng_seed) {}

    SyntheticSequence run() {
        SyntheticSequence seq;
        spawn_objects(seq.objects);
        spawn_poles();
        const double cycle_us = cfg_.cycle_ms * 1000.0;
        const double duration_us = cfg_.duration_s * 1e6;
        for (int n = 0;; ++n) {
            bool any = false;
            for (int s = 0; s < 4; ++s) {
                const auto t = static_cast<Timestamp>(std::llround(n * cycle_us + s * cycle_us / 4.0));
                if (static_cast<double>(t) >= duration_us) continue;
                any = true;
                seq.scans.push_back(make_scan(s, t, seq.objects));
            }
            if (!any) break;
        }
        return seq;
    }

private:
    EgoPose ego_at(Timestamp t) const {
        const double ts = static_cast<double>(t) * 1e-6;
        EgoPose p;
        p.timestamp = t;
        if (std::abs(cfg_.ego_yaw_rate) < 1e-12) {
            p.x = cfg_.ego_speed * ts;
        } else {
            const double r = cfg_.ego_speed / cfg_.ego_yaw_rate;
            const double h = cfg_.ego_yaw_rate * ts;
            p.x = r * std::sin(h);
            p.y = r * (1.0 - std::cos(h));
        }
        p.yaw = wrap_angle(cfg_.ego_yaw_rate * ts);
        return p;
    }

    SensorPose sensor_pose(const EgoPose& ego, int s) const {
        const SensorMount& m = cfg_.sensors[s];
        const double c = std::cos(ego.yaw);
        const double sn = std::sin(ego.yaw);
        return {{ego.x + c * m.x - sn * m.y, ego.y + sn * m.x + c * m.y}, ego.yaw + m.yaw};
    }

    bool in_view(const SensorPose& sp, Vec2 p) const {
        const double dx = p.x - sp.pos.x;
        const double dy = p.y - sp.pos.y;
        const double r = std::hypot(dx, dy);
        if (r > cfg_.sensor_range || r < 0.5) return false;
        const double bearing = wrap_angle(std::atan2(dy, dx) - sp.yaw);
        return std::abs(bearing) <= 0.5 * cfg_.sensor_fov_deg * kPi / 180.0;
    }

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    double normal(double m, double s) {
        return s > 0.0 ? std::normal_distribution<double>(m, s)(rng_) : m;
    }
    int poisson(double mean) {
        return mean > 0.0 ? std::poisson_distribution<int>(mean)(rng_) : 0;
    }

    void spawn_objects(std::vector<SimObject>& objects) {
        int id = 0;
        const double r_min = std::min(6.0, 0.5 * cfg_.spawn_radius);
        for (int k = 0; k < kNumObjectKinds; ++k) {
            const KindProfile& prof = kProfiles[k];
            for (int i = 0; i < cfg_.n_objects[k]; ++i) {
                SimObject o;
                o.track_id = id++;
                o.kind = static_cast<ObjectKind>(k);
                o.length = prof.length * uniform(0.9, 1.1);
                o.width = prof.width * uniform(0.9, 1.1);
                const double r = uniform(r_min, cfg_.spawn_radius);
                const double a = uniform(-1.1, 1.1);
                o.initial.x = r * std::cos(a);
                o.initial.y = r * std::sin(a);
                o.initial.heading = uniform(-kPi, kPi);
                o.initial.speed = std::max(0.3, normal(prof.speed_mean, prof.speed_sd));
                o.yaw_rate = normal(0.0, 0.1);
                objects.push_back(o);
            }
        }
    }

    void spawn_poles() {
        for (int i = 0; i < cfg_.n_poles; ++i) {
            const double r = uniform(3.0, cfg_.spawn_radius);
            const double a = uniform(-1.3, 1.3);
            poles_.push_back({r * std::cos(a) + cfg_.ego_speed * cfg_.duration_s * uniform(0.0, 1.0),
                              r * std::sin(a)});
        }
    }

    Detection base(const Scan& scan, Vec2 p, double vx, double vy, double rcs, Provenance prov) {
        Detection d;
        d.x_world = p.x;
        d.y_world = p.y;
        d.vx_comp = vx + normal(0.0, cfg_.velocity_noise);
        d.vy_comp = vy + normal(0.0, cfg_.velocity_noise);
        d.rcs = rcs;
        d.timestamp = scan.timestamp;
        d.sensor_id = scan.sensor_id;
        d.provenance = prov;
        return d;
    }

    // Reflection point on `wall` for the path sensor -> wall -> target, if any.
    static bool specular_path(const Segment& wall, Vec2 sensor, Vec2 target, Vec2 ghost) {
        const double wx = wall.b.x - wall.a.x;
        const double wy = wall.b.y - wall.a.y;
        auto side = [&](Vec2 p) { return wx * (p.y - wall.a.y) - wy * (p.x - wall.a.x); };
        const double ss = side(sensor);
        const double st = side(target);
        if (ss * st <= 0.0) return false;  // both must be strictly on one side
        // Sensor -> ghost line must cross the wall segment.
        const double dx = ghost.x - sensor.x;
        const double dy = ghost.y - sensor.y;
        const double denom = wx * dy - wy * dx;
        if (std::abs(denom) < 1e-12) return false;
        const double ax = sensor.x - wall.a.x;
        const double ay = sensor.y - wall.a.y;
        const double u = (ax * dy - ay * dx) / denom;  // along wall
        const double v = (ax * wy - ay * wx) / denom;  // along sensor->ghost
        return u >= 0.0 && u <= 1.0 && v > 0.0 && v < 1.0;
    }

    Scan make_scan(int s, Timestamp t, const std::vector<SimObject>& objects) {
        Scan scan;
        scan.sensor_id = s;
        scan.timestamp = t;
        scan.ego_pose = ego_at(t);
        const SensorPose sp = sensor_pose(scan.ego_pose, s);
        const double ts = static_cast<double>(t) * 1e-6;

        std::vector<std::size_t> direct;
        for (const SimObject& obj : objects) {
            const KindProfile& prof = kProfiles[static_cast<int>(obj.kind)];
            const ObjectState st = obj.state_at(ts);
            if (!in_view(sp, {st.x, st.y})) continue;
            const int n = 1 + poisson(prof.points_mean);
            const double c = std::cos(st.heading);
            const double sn = std::sin(st.heading);
            const double vx = c * st.speed;
            const double vy = sn * st.speed;
            // Reflections come from the sensor-facing half of the body.
            const double lu = c * (sp.pos.x - st.x) + sn * (sp.pos.y - st.y);
            const double lv = -sn * (sp.pos.x - st.x) + c * (sp.pos.y - st.y);
            for (int i = 0; i < n; ++i) {
                double u = uniform(-0.5, 0.5) * obj.length;
                double v = uniform(-0.5, 0.5) * obj.width;
                if (std::abs(lu) / obj.length > std::abs(lv) / obj.width) {
                    u = std::copysign(std::abs(u), lu);
                } else {
                    v = std::copysign(std::abs(v), lv);
                }
                Vec2 p{st.x + c * u - sn * v + normal(0.0, cfg_.position_noise),
                       st.y + sn * u + c * v + normal(0.0, cfg_.position_noise)};
                if (!in_view(sp, p)) continue;
                const double rcs = normal(prof.rcs_mean, prof.rcs_sd * cfg_.rcs_spread);
                Detection d = base(scan, p, vx, vy, rcs, Provenance::Object);
                d.track_id = obj.track_id;
                scan.detections.push_back(d);
                direct.push_back(scan.detections.size() - 1);
            }
        }

        // Specular ghosts of object returns.
        for (std::size_t idx : direct) {
            const Detection src = scan.detections[idx];
            for (const Segment& wall : cfg_.mirror_surfaces) {
                const Vec2 p{src.x_world, src.y_world};
                const Vec2 g = reflect_across(wall, p);
                if (!specular_path(wall, sp.pos, p, g)) continue;
                if (!in_view(sp, g)) continue;
                if (uniform(0.0, 1.0) >= cfg_.ghost_probability) continue;
                const double wx = wall.b.x - wall.a.x;
                const double wy = wall.b.y - wall.a.y;
                const double len = std::hypot(wx, wy);
                const double nx = -wy / len;
                const double ny = wx / len;
                const double vn = src.vx_comp * nx + src.vy_comp * ny;
                Detection d = base(scan, g, src.vx_comp - 2.0 * vn * nx, src.vy_comp - 2.0 * vn * ny,
                                   src.rcs - cfg_.ghost_rcs_loss, Provenance::Ghost);
                scan.detections.push_back(d);
            }
        }

        // Static environment: walls and poles.
        for (const Segment& wall : cfg_.mirror_surfaces) {
            const double len = std::hypot(wall.b.x - wall.a.x, wall.b.y - wall.a.y);
            const int n = poisson(len / 3.0);
            for (int i = 0; i < n; ++i) {
                const double f = uniform(0.0, 1.0);
                Vec2 p{wall.a.x + f * (wall.b.x - wall.a.x) + normal(0.0, cfg_.position_noise),
                       wall.a.y + f * (wall.b.y - wall.a.y) + normal(0.0, cfg_.position_noise)};
                if (!in_view(sp, p)) continue;
                const double rcs = normal(6.0, 3.0);
                scan.detections.push_back(base(scan, p, 0.0, 0.0, rcs, Provenance::Environment));
            }
        }
        for (const Vec2& pole : poles_) {
            if (!in_view(sp, pole) || uniform(0.0, 1.0) > 0.8) continue;
            Vec2 p{pole.x + normal(0.0, cfg_.position_noise), pole.y + normal(0.0, cfg_.position_noise)};
            if (!in_view(sp, p)) continue;
            const double rcs = normal(9.0, 3.0);
            scan.detections.push_back(base(scan, p, 0.0, 0.0, rcs, Provenance::Environment));
        }

        // False alarms, uniform over the sensor's field of view.
        const int n_fa = poisson(cfg_.clutter_rate);
        const double half_fov = 0.5 * cfg_.sensor_fov_deg * kPi / 180.0;
        for (int i = 0; i < n_fa; ++i) {
            const double r = cfg_.sensor_range * std::sqrt(uniform(0.0025, 1.0));
            const double a = sp.yaw + uniform(-half_fov, half_fov);
            const Vec2 p{sp.pos.x + r * std::cos(a), sp.pos.y + r * std::sin(a)};
            if (!in_view(sp, p)) continue;
            const double vx = normal(0.0, 4.0);
            const double vy = normal(0.0, 4.0);
            const double rcs = normal(-12.0, 4.0);
            scan.detections.push_back(base(scan, p, vx, vy, rcs, Provenance::FalseAlarm));
        }

        derive_labels(scan, objects, cfg_.inflation);
        return scan;
    }

    const SceneConfig& cfg_;
    std::mt19937_64 rng_;
    std::vector<Vec2> poles_;
};

}  // namespace

SyntheticSequence generate_sequence(const SceneConfig& cfg) {
    cfg.validate();
    if (cfg.duration_s <= 0.0) return {};
    return Generator(cfg).run();
}

}  // namespace radarseg
