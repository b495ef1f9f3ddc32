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


#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "radarseg/ingest.hpp"
#include "radarseg/synthgen.hpp"

using namespace radarseg;

namespace {

// Independent point reflection: solve for the foot of the perpendicular via the
// implicit line equation a*x + b*y + c = 0.
Vec2 mirror_oracle(const Segment& s, Vec2 p) {
    const double a = s.a.y - s.b.y;
    const double b = s.b.x - s.a.x;
    const double c = s.a.x * s.b.y - s.b.x * s.a.y;
    const double k = (a * p.x + b * p.y + c) / (a * a + b * b);
    return {p.x - 2 * a * k, p.y - 2 * b * k};
}

SceneConfig busy_scene(std::uint64_t seed) {
    SceneConfig cfg;
    cfg.duration_s = 0.5;
    cfg.spawn_radius = 20.0;
    cfg.n_objects = {2, 2, 1, 1, 1, 1};
    cfg.mirror_surfaces = {{{-30, 8}, {40, 8}}, {{-30, -8}, {40, -8}}};
    cfg.clutter_rate = 2.0;
    cfg.rng_seed = seed;
    return cfg;
}

std::string serialize(const SyntheticSequence& seq) {
    std::ostringstream os;
    write_scan_stream(os, seq.scans);
    return os.str();
}

// Sensor position and boresight in the world, from the ego pose and mount.
std::pair<Vec2, double> sensor_world(const SceneConfig& cfg, const Scan& s) {
    const auto& m = cfg.sensors[s.sensor_id];
    const double c = std::cos(s.ego_pose.yaw), sn = std::sin(s.ego_pose.yaw);
    return {{s.ego_pose.x + c * m.x - sn * m.y, s.ego_pose.y + sn * m.x + c * m.y}, s.ego_pose.yaw + m.yaw};
}

}  // namespace

TEST(Synthgen, Deterministic) {
    const auto cfg = busy_scene(11);
    EXPECT_EQ(serialize(generate_sequence(cfg)), serialize(generate_sequence(cfg)));
    EXPECT_NE(serialize(generate_sequence(cfg)), serialize(generate_sequence(busy_scene(12))));
}

TEST(Synthgen, ZeroDurationIsEmpty) {
    auto cfg = busy_scene(1);
    cfg.duration_s = 0.0;
    EXPECT_TRUE(generate_sequence(cfg).scans.empty());
}

TEST(Synthgen, AblatedSceneIsOnlyStationary) {
    SceneConfig cfg;
    cfg.duration_s = 0.5;
    cfg.n_objects = {0, 0, 0, 0, 0, 0};
    cfg.clutter_rate = 0.0;
    cfg.n_poles = 10;
    cfg.spawn_radius = 30.0;
    auto seq = generate_sequence(cfg);
    std::size_t n = 0;
    for (const auto& s : seq.scans)
        for (const auto& d : s.detections) {
            EXPECT_EQ(d.fused_label, FusedLabel::Stationary);
            ++n;
        }
    EXPECT_GT(n, 0u);
}

TEST(Synthgen, StaggeredSensorCycles) {
    SceneConfig cfg;
    cfg.duration_s = 0.3;
    auto seq = generate_sequence(cfg);
    ASSERT_EQ(seq.scans.size(), 20u);
    for (std::size_t i = 0; i < seq.scans.size(); ++i) {
        EXPECT_EQ(seq.scans[i].sensor_id, static_cast<int>(i % 4));
        EXPECT_EQ(seq.scans[i].timestamp, static_cast<Timestamp>(15'000 * i));
    }
}

TEST(Synthgen, ReflectMatchesOracle) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-20, 20);
    for (int i = 0; i < 500; ++i) {
        Segment s{{u(rng), u(rng)}, {u(rng), u(rng)}};
        Vec2 p{u(rng), u(rng)};
        auto r = reflect_across(s, p);
        auto o = mirror_oracle(s, p);
        ASSERT_NEAR(r.x, o.x, 1e-9);
        ASSERT_NEAR(r.y, o.y, 1e-9);
    }
}

TEST(Synthgen, GhostsMirrorCarDetections) {
    // One car and one wall; ghosts must be mirror images of same-scan car points.
    std::size_t ghosts = 0;
    for (std::uint64_t seed = 1; seed <= 20 && ghosts == 0; ++seed) {
        SceneConfig cfg;
        cfg.duration_s = 1.0;
        cfg.n_objects = {1, 0, 0, 0, 0, 0};
        cfg.n_poles = 0;
        cfg.clutter_rate = 0.0;
        cfg.ghost_probability = 1.0;
        cfg.spawn_radius = 15.0;
        const Segment wall{{-30, 10}, {60, 10}};
        cfg.mirror_surfaces = {wall};
        cfg.rng_seed = seed;
        auto seq = generate_sequence(cfg);
        for (const auto& s : seq.scans) {
            for (const auto& g : s.detections) {
                if (g.provenance != Provenance::Ghost) continue;
                ++ghosts;
                bool matched = false;
                for (const auto& d : s.detections) {
                    if (d.provenance != Provenance::Object) continue;
                    auto m = mirror_oracle(wall, {d.x_world, d.y_world});
                    if (std::hypot(m.x - g.x_world, m.y - g.y_world) < 1e-9) matched = true;
                }
                EXPECT_TRUE(matched);
                EXPECT_EQ(g.fused_label, FusedLabel::Clutter);
                EXPECT_EQ(g.semseg_label, SemSegLabel::Background);
            }
        }
    }
    EXPECT_GT(ghosts, 0u);
}

TEST(Synthgen, GhostsAreFartherThanTheirSource) {
    const auto cfg = busy_scene(21);
    auto seq = generate_sequence(cfg);
    std::size_t checked = 0;
    for (const auto& s : seq.scans) {
        const auto [sp, yaw] = sensor_world(cfg, s);
        for (const auto& g : s.detections) {
            if (g.provenance != Provenance::Ghost) continue;
            for (const auto& d : s.detections) {
                if (d.provenance != Provenance::Object) continue;
                for (const auto& wall : cfg.mirror_surfaces) {
                    auto m = mirror_oracle(wall, {d.x_world, d.y_world});
                    if (std::hypot(m.x - g.x_world, m.y - g.y_world) > 1e-9) continue;
                    EXPECT_GT(std::hypot(g.x_world - sp.x, g.y_world - sp.y),
                              std::hypot(d.x_world - sp.x, d.y_world - sp.y));
                    ++checked;
                }
            }
        }
    }
    EXPECT_GT(checked, 0u);
}

TEST(Synthgen, LabelsConsistentAndClosed) {
    std::size_t n = 0;
    for (std::uint64_t seed = 1; n < 10'000; ++seed) {
        auto seq = generate_sequence(busy_scene(seed));
        for (const auto& s : seq.scans) {
            for (const auto& d : s.detections) {
                ++n;
                ASSERT_TRUE(d.fused_label && d.clutter_label && d.semseg_label);
                EXPECT_EQ(*d.clutter_label, fused_to_clutter(*d.fused_label));
                EXPECT_EQ(*d.semseg_label, fused_to_semseg(*d.fused_label));
                if (*d.clutter_label != ClutterLabel::MovingObject) {
                    EXPECT_FALSE(is_object_class(*d.semseg_label));
                }
                EXPECT_TRUE(is_valid(d));
            }
        }
    }
}

TEST(Synthgen, DetectionsInsideRangeAndFov) {
    const auto cfg = busy_scene(4);
    auto seq = generate_sequence(cfg);
    const double half = 0.5 * cfg.sensor_fov_deg * kPi / 180.0;
    for (const auto& s : seq.scans) {
        const auto [sp, yaw] = sensor_world(cfg, s);
        for (const auto& d : s.detections) {
            const double dx = d.x_world - sp.x, dy = d.y_world - sp.y;
            EXPECT_LE(std::hypot(dx, dy), cfg.sensor_range);
            EXPECT_LE(std::abs(wrap_angle(std::atan2(dy, dx) - yaw)), half + 1e-12);
            EXPECT_EQ(d.timestamp, s.timestamp);
            EXPECT_EQ(d.sensor_id, s.sensor_id);
        }
    }
}

TEST(DeriveLabels, FootprintAndInflation) {
    SimObject car;
    car.track_id = 3;
    car.kind = ObjectKind::Car;
    car.length = 4.0;
    car.width = 2.0;
    SimObject skater;
    skater.track_id = 4;
    skater.kind = ObjectKind::Unusual;
    skater.initial.x = 20.0;
    const std::vector<SimObject> objs{car, skater};

    Scan scan;
    auto add = [&](double x, double y, Provenance p, std::optional<int> track) {
        Detection d;
        d.x_world = x;
        d.y_world = y;
        d.provenance = p;
        d.track_id = track;
        scan.detections.push_back(d);
    };
    add(1.0, 0.5, Provenance::Object, 3);   // inside
    add(2.2, 0.0, Provenance::Object, 3);   // 0.2 m outside
    add(3.0, 0.0, Provenance::Object, 3);   // 1.0 m outside
    add(20.0, 0.0, Provenance::Object, 4);  // inside skater
    add(50.0, 5.0, Provenance::Environment, std::nullopt);
    add(7.0, 7.0, Provenance::Ghost, std::nullopt);
    add(9.0, 9.0, Provenance::FalseAlarm, std::nullopt);
    derive_labels(scan, objs, 0.5);
    const auto& d = scan.detections;
    EXPECT_EQ(d[0].fused_label, FusedLabel::Car);
    EXPECT_EQ(d[1].fused_label, FusedLabel::InaccurateMeasurement);
    EXPECT_EQ(d[2].fused_label, FusedLabel::Clutter);
    EXPECT_EQ(d[3].fused_label, FusedLabel::OtherObject);
    EXPECT_EQ(d[3].semseg_label, SemSegLabel::Unlabeled);
    EXPECT_EQ(d[4].fused_label, FusedLabel::Stationary);
    EXPECT_EQ(d[5].fused_label, FusedLabel::Clutter);
    EXPECT_EQ(d[5].semseg_label, SemSegLabel::Background);
    EXPECT_EQ(d[6].fused_label, FusedLabel::Clutter);

    Scan bad;
    bad.detections.emplace_back();
    EXPECT_THROW(derive_labels(bad, objs, 0.5), InputError);
    Scan orphan;
    orphan.detections.emplace_back();
    orphan.detections[0].provenance = Provenance::Object;
    orphan.detections[0].track_id = 99;
    EXPECT_THROW(derive_labels(orphan, objs, 0.5), InputError);
}

TEST(Synthgen, FootprintDistance) {
    SimObject o;
    o.length = 4.0;
    o.width = 2.0;
    o.initial.heading = kPi / 2;  // long axis along y
    EXPECT_NEAR(footprint_distance(o, 0.0, {0.0, 0.0}), -1.0, 1e-12);
    EXPECT_NEAR(footprint_distance(o, 0.0, {0.0, 2.5}), 0.5, 1e-12);
    EXPECT_NEAR(footprint_distance(o, 0.0, {4.0, 5.0}), std::hypot(3.0, 3.0), 1e-12);
}

TEST(Synthgen, SequencesUseConsecutiveSeeds) {
    auto cfg = busy_scene(40);
    cfg.duration_s = 0.2;
    auto seqs = generate_sequences(cfg, 3);
    ASSERT_EQ(seqs.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        auto c = cfg;
        c.rng_seed = 40 + i;
        EXPECT_EQ(serialize(seqs[i]), serialize(generate_sequence(c)));
    }
    EXPECT_THROW(generate_sequences(cfg, -1), InputError);
}

TEST(Synthgen, RcsSpreadScalesObjectRcs) {
    auto spread_of = [](double f) {
        auto cfg = busy_scene(8);
        cfg.duration_s = 3.0;
        cfg.n_objects = {3, 0, 0, 0, 0, 0};
        cfg.mirror_surfaces.clear();
        cfg.rcs_spread = f;
        double s = 0, s2 = 0;
        int n = 0;
        for (const auto& scan : generate_sequence(cfg).scans)
            for (const auto& d : scan.detections)
                if (d.provenance == Provenance::Object) {
                    s += d.rcs;
                    s2 += d.rcs * d.rcs;
                    ++n;
                }
        return std::sqrt(s2 / n - (s / n) * (s / n));
    };
    EXPECT_NEAR(spread_of(0.0), 0.0, 1e-6);
    EXPECT_NEAR(spread_of(1.0) / spread_of(0.5), 2.0, 0.3);
}

TEST(Synthgen, ConfigValidation) {
    SceneConfig cfg;
    cfg.ghost_probability = 1.5;
    EXPECT_THROW(cfg.validate(), InputError);
    cfg = {};
    cfg.rcs_spread = -1;
    EXPECT_THROW(cfg.validate(), InputError);
    cfg = {};
    cfg.mirror_surfaces = {{{1, 1}, {1, 1}}};
    EXPECT_THROW(cfg.validate(), InputError);

    std::istringstream in("duration = 0.5\nn_car = 4\nmirror_surfaces = 0,1,2,3\nseed = 9\n");
    auto parsed = scene_config_from(KeyValueConfig::parse(in));
    EXPECT_EQ(parsed.duration_s, 0.5);
    EXPECT_EQ(parsed.n_objects[0], 4);
    ASSERT_EQ(parsed.mirror_surfaces.size(), 1u);
    EXPECT_EQ(parsed.mirror_surfaces[0].b.y, 3.0);
    EXPECT_EQ(parsed.rng_seed, 9u);
    std::istringstream odd("mirror_surfaces = 0,1,2\n");
    EXPECT_THROW(scene_config_from(KeyValueConfig::parse(odd)), InputError);
}

TEST(Synthgen, DesignDefaults) {
    SceneConfig cfg;
    EXPECT_EQ(cfg.cycle_ms, 60.0);
    EXPECT_EQ(cfg.sensor_fov_deg, 120.0);
    EXPECT_EQ(cfg.sensor_range, 100.0);
    EXPECT_EQ(cfg.position_noise, 0.15);
    EXPECT_EQ(cfg.inflation, 0.5);
}
