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
#include <filesystem>
#include <fstream>
#include <map>

#include "radarseg/pipeline.hpp"
#include "radarseg/synthgen.hpp"

using namespace radarseg;
namespace fs = std::filesystem;

namespace {

ModelOptions tiny_options() {
    ModelOptions o;
    o.grid = GridConfig::square(32, 0.8);
    o.backbone.wide = 4;
    o.backbone.narrow = 3;
    o.backbone.deconv_channels = 2;
    o.seed = 3;
    return o;
}

const Dataset& small_data() {
    static const Dataset d = [] {
        SceneConfig cfg;
        cfg.duration_s = 0.3;
        cfg.spawn_radius = 10.0;
        cfg.sensor_range = 12.0;
        cfg.n_objects = {1, 1, 1, 1, 1, 1};
        cfg.mirror_surfaces = {{{-5, 6}, {15, 6}}};
        cfg.rng_seed = 5;
        std::vector<std::vector<Scan>> seqs;
        for (auto& s : generate_sequences(cfg, 2)) seqs.push_back(std::move(s.scans));
        return make_dataset(seqs, 2);
    }();
    return d;
}

TrainConfig quick() {
    TrainConfig tc;
    tc.epochs = 1;
    tc.batch_size = 2;
    return tc;
}

WindowPoint labeled(double x, double y, double rcs, FusedLabel f, bool latest) {
    WindowPoint p;
    p.x_vehicle = x;
    p.y_vehicle = y;
    p.detection.rcs = rcs;
    p.detection.set_fused(f);
    p.is_latest_scan = latest;
    return p;
}

std::vector<std::vector<float>> snapshot(const nn::Network<float>& net) {
    std::vector<std::vector<float>> out;
    for (const auto& p : net.params()) out.emplace_back(p.value.values().begin(), p.value.values().end());
    return out;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("radarseg_pipeline_" + name); }

void set_head_bias(ModelNet& mn, std::size_t head, std::vector<float> bias) {
    for (auto& p : mn.net.params()) {
        if (p.name == mn.net.heads()[head].name + ".head.bias") {
            for (std::size_t i = 0; i < bias.size(); ++i) p.value[i] = bias[i];
            return;
        }
    }
    FAIL() << "head bias not found";
}

}  // namespace

TEST(Variants, NamesAndClasses) {
    for (Variant v : kAllVariants) EXPECT_EQ(parse_variant(variant_name(v)), v);
    EXPECT_EQ(parse_variant("single_task"), Variant::SingleTaskSemSeg);
    EXPECT_EQ(parse_variant("label_fusion"), Variant::LabelFusion7);
    EXPECT_FALSE(parse_variant("resnet").has_value());
    EXPECT_EQ(head_classes(HeadTask::Clutter), 3);
    EXPECT_EQ(head_classes(HeadTask::SemSeg), 6);
    EXPECT_EQ(head_classes(HeadTask::Fused7), 7);
    EXPECT_EQ(head_classes(HeadTask::Fused9), 9);
    const auto opts = tiny_options();
    EXPECT_EQ(build_model(Variant::LabelFusion7, opts).nets[0].net.heads()[0].classes, 7);
    EXPECT_EQ(build_model(Variant::SingleTaskClutter, opts).nets[0].net.heads()[0].classes, 3);
    EXPECT_EQ(build_model(Variant::SeriesConnection, opts).nets.size(), 2u);
    EXPECT_EQ(build_model(Variant::MultiHead, opts).nets[0].net.heads().size(), 2u);
}

TEST(Variants, MultiHeadParameterBudget) {
    auto opts = tiny_options();
    const auto& b = opts.backbone;
    const std::size_t st = build_model(Variant::SingleTaskSemSeg, opts).parameter_count();
    const std::size_t clutter_head = static_cast<std::size_t>(b.narrow * 3 + 3);
    const std::size_t branch = static_cast<std::size_t>(9 * b.narrow * b.narrow + b.narrow);
    opts.branch_convs = 0;
    EXPECT_EQ(build_model(Variant::MultiHead, opts).parameter_count(), st + clutter_head);
    opts.branch_convs = 1;
    EXPECT_EQ(build_model(Variant::MultiHead, opts).parameter_count(), st + clutter_head + 2 * branch);
}

TEST(Targets, IndicesPerHead) {
    Detection d;
    d.set_fused(FusedLabel::OtherObject);
    EXPECT_EQ(target_index(HeadTask::Fused7, d), nn::kIgnoreTarget);
    EXPECT_EQ(target_index(HeadTask::Fused9, d), static_cast<int>(FusedLabel::OtherObject));
    EXPECT_EQ(target_index(HeadTask::SemSeg, d), nn::kIgnoreTarget);
    EXPECT_EQ(target_index(HeadTask::Clutter, d), static_cast<int>(ClutterLabel::MovingObject));
    d.set_fused(FusedLabel::InaccurateMeasurement);
    EXPECT_EQ(target_index(HeadTask::Fused7, d), nn::kIgnoreTarget);
    d.set_fused(FusedLabel::Clutter);
    EXPECT_EQ(target_index(HeadTask::Fused7, d), 5);
    EXPECT_EQ(target_index(HeadTask::SemSeg, d), static_cast<int>(SemSegLabel::Background));
    d.set_fused(FusedLabel::Stationary);
    EXPECT_EQ(target_index(HeadTask::Fused7, d), 6);
    d.set_fused(FusedLabel::TwoWheeler);
    EXPECT_EQ(target_index(HeadTask::Fused7, d), 3);
    EXPECT_EQ(fused_from_index(HeadTask::Fused7, 5), FusedLabel::Clutter);
    EXPECT_EQ(fused_from_index(HeadTask::Fused7, 6), FusedLabel::Stationary);
    EXPECT_EQ(fused_from_index(HeadTask::Fused9, 5), FusedLabel::OtherObject);
    EXPECT_THROW(fused_from_index(HeadTask::Fused7, 7), ShapeError);
    EXPECT_EQ(target_index(HeadTask::Clutter, Detection{}), nn::kIgnoreTarget);
}

TEST(Targets, DefaultWeights) {
    EXPECT_EQ(default_class_weights(HeadTask::Fused7),
              (std::vector<double>{4.93, 4.93, 4.93, 4.93, 4.93, 3.52, 0.70}));
    const auto w9 = default_class_weights(HeadTask::Fused9);
    ASSERT_EQ(w9.size(), 9u);
    EXPECT_EQ(w9[static_cast<int>(FusedLabel::OtherObject)], 4.93);
    EXPECT_EQ(w9[static_cast<int>(FusedLabel::InaccurateMeasurement)], 4.93);
    EXPECT_EQ(w9[static_cast<int>(FusedLabel::Clutter)], 3.52);
    EXPECT_EQ(w9[static_cast<int>(FusedLabel::Stationary)], 0.70);
    EXPECT_EQ(default_class_weights(HeadTask::Clutter).size(), 3u);
    EXPECT_EQ(default_class_weights(HeadTask::SemSeg).size(), 6u);
}

TEST(Targets, CellReduction) {
    const auto cfg = GridConfig::square(16, 1.0);
    PointCloudWindow w;
    // Cell A: higher-RCS latest detection wins; the old scan is ignored.
    w.points.push_back(labeled(0.2, 0.2, 5.0, FusedLabel::Car, true));
    w.points.push_back(labeled(0.3, 0.3, 10.0, FusedLabel::Clutter, true));
    w.points.push_back(labeled(0.4, 0.4, 99.0, FusedLabel::Stationary, false));
    // Cell B: equal RCS, higher class weight wins.
    w.points.push_back(labeled(2.2, 0.2, 3.0, FusedLabel::Stationary, true));
    w.points.push_back(labeled(2.3, 0.3, 3.0, FusedLabel::Pedestrian, true));
    // Cell C: only old scans.
    w.points.push_back(labeled(4.2, 0.2, 3.0, FusedLabel::Car, false));
    // Cell D: OtherObject only.
    w.points.push_back(labeled(-2.5, 0.2, 3.0, FusedLabel::OtherObject, true));
    const auto g = rasterize(w, cfg);
    const auto weights = default_class_weights(HeadTask::Fused7);
    const auto t = cell_targets(g, w, HeadTask::Fused7, weights);
    EXPECT_EQ(t[cell_of(cfg, 0.2, 0.2)], 5);
    EXPECT_EQ(t[cell_of(cfg, 2.2, 0.2)], static_cast<int>(FusedLabel::Pedestrian));
    EXPECT_EQ(t[cell_of(cfg, 4.2, 0.2)], nn::kIgnoreTarget);
    EXPECT_EQ(t[cell_of(cfg, -2.5, 0.2)], nn::kIgnoreTarget);
    const auto t9 = cell_targets(g, w, HeadTask::Fused9, default_class_weights(HeadTask::Fused9));
    EXPECT_EQ(t9[cell_of(cfg, -2.5, 0.2)], static_cast<int>(FusedLabel::OtherObject));
    int labeled_cells = 0;
    for (int v : t) labeled_cells += v != nn::kIgnoreTarget;
    EXPECT_EQ(labeled_cells, 2);
}

TEST(Targets, FrequencyWeightsMatchCountOracle) {
    const auto& data = small_data();
    const auto grid = tiny_options().grid;
    // Independent count: group latest detections per cell by coordinates.
    std::vector<double> counts(kNumFusedLabels, 0.0);
    const auto base = default_class_weights(HeadTask::Fused9);
    for (const auto& w : data.windows) {
        std::map<int, const Detection*> best;
        for (const auto& p : w.points) {
            if (!p.is_latest_scan) continue;
            const int c = cell_of(grid, p.x_vehicle, p.y_vehicle);
            if (c < 0) continue;
            auto [it, fresh] = best.emplace(c, &p.detection);
            if (fresh) continue;
            const Detection& cur = *it->second;
            const double wn = base[static_cast<int>(*p.detection.fused_label)];
            const double wc = base[static_cast<int>(*cur.fused_label)];
            if (p.detection.rcs > cur.rcs || (p.detection.rcs == cur.rcs && wn > wc)) it->second = &p.detection;
        }
        for (auto [c, d] : best) counts[static_cast<int>(*d->fused_label)] += 1.0;
    }
    const auto w = frequency_weights(data, grid);
    const double stat = counts[static_cast<int>(FusedLabel::Stationary)];
    ASSERT_GT(stat, 0.0);
    double max_w = 0.70;
    for (int k = 0; k < kNumFusedLabels; ++k)
        if (counts[k] > 0) max_w = std::max(max_w, 0.70 * stat / counts[k]);
    for (int k = 0; k < kNumFusedLabels; ++k) {
        const double expect = counts[k] > 0 ? 0.70 * stat / counts[k] : max_w;
        EXPECT_NEAR(w[k], expect, 1e-12) << to_string(static_cast<FusedLabel>(k));
    }
    EXPECT_DOUBLE_EQ(w[static_cast<int>(FusedLabel::Stationary)], 0.70);
}

TEST(Alignment, Rules) {
    DualPrediction p;
    auto add = [&](ClutterLabel c, SemSegLabel s) {
        PointPrediction pt;
        pt.clutter = c;
        pt.semseg = s;
        p.points.push_back(pt);
    };
    add(ClutterLabel::Clutter, SemSegLabel::Car);
    add(ClutterLabel::MovingObject, SemSegLabel::Background);
    add(ClutterLabel::MovingObject, SemSegLabel::Car);
    add(ClutterLabel::Stationary, SemSegLabel::LargeVehicle);
    p.semseg_scores = {0.9f, 0.1f};
    const auto a = align_predictions(p);
    EXPECT_EQ(a.points[0].semseg, SemSegLabel::Background);
    EXPECT_EQ(a.points[0].clutter, ClutterLabel::Clutter);
    EXPECT_EQ(a.points[1].semseg, SemSegLabel::Background);
    EXPECT_EQ(a.points[1].clutter, ClutterLabel::MovingObject);
    EXPECT_EQ(a.points[2].semseg, SemSegLabel::Car);
    EXPECT_EQ(a.points[3].semseg, SemSegLabel::Background);
    EXPECT_EQ(a.semseg_scores, p.semseg_scores);

    // Idempotent over every label pair.
    DualPrediction all;
    for (auto c : kAllClutterLabels)
        for (auto s : kAllSemSegLabels) {
            PointPrediction pt;
            pt.clutter = c;
            pt.semseg = s;
            all.points.push_back(pt);
        }
    const auto once = align_predictions(all);
    const auto twice = align_predictions(once);
    for (std::size_t i = 0; i < once.points.size(); ++i) {
        EXPECT_EQ(once.points[i].semseg, twice.points[i].semseg);
        if (*once.points[i].clutter != ClutterLabel::MovingObject) {
            EXPECT_FALSE(is_object_class(*once.points[i].semseg));
        }
    }
}

TEST(Infer, UntrainedThrows) {
    const auto m = build_model(Variant::LabelFusion7, tiny_options());
    EXPECT_THROW(infer(m, small_data().windows[0]), InputError);
}

TEST(Infer, LabelFusionMapsBothTasks) {
    auto m = build_model(Variant::LabelFusion7, tiny_options());
    m.trained = true;
    const auto& w = small_data().windows[3];
    for (auto [idx, fused] : {std::pair{6, FusedLabel::Stationary}, {5, FusedLabel::Clutter}, {1, FusedLabel::Pedestrian}}) {
        std::vector<float> bias(7, 0.0f);
        bias[idx] = 50.0f;
        set_head_bias(m.nets[0], 0, bias);
        const auto p = infer(m, w);
        for (const auto& pt : p.points) {
            if (!pt.in_map) continue;
            EXPECT_EQ(pt.fused, fused);
            EXPECT_EQ(pt.clutter, fused_to_clutter(fused));
            EXPECT_EQ(pt.semseg, fused_to_semseg(fused));
        }
        EXPECT_EQ(p.fused_scores.size(), w.points.size() * 7);
    }
}

TEST(Infer, SeriesRemovesPredictedClutter) {
    auto m = build_model(Variant::SeriesConnection, tiny_options());
    m.trained = m.front_trained = true;
    const auto& w = small_data().windows[4];
    set_head_bias(m.nets[0], 0, {0.0f, 50.0f, 0.0f});  // everything Clutter
    set_head_bias(m.nets[1], 0, {50.0f, 0, 0, 0, 0, 0});
    auto p = infer(m, w);
    std::size_t in_map = 0;
    for (const auto& pt : p.points) {
        if (!pt.in_map) continue;
        ++in_map;
        EXPECT_TRUE(pt.removed);
        EXPECT_EQ(pt.semseg, SemSegLabel::Background);
    }
    EXPECT_GT(in_map, 0u);
    set_head_bias(m.nets[0], 0, {0.0f, 0.0f, 50.0f});  // everything Stationary
    p = infer(m, w);
    for (const auto& pt : p.points) {
        if (!pt.in_map) continue;
        EXPECT_FALSE(pt.removed);
        EXPECT_EQ(pt.semseg, SemSegLabel::Car);
    }
}

TEST(Infer, MultiHeadIsAligned) {
    auto m = build_model(Variant::MultiHead, tiny_options());
    m.trained = true;
    set_head_bias(m.nets[0], 0, {0.0f, 50.0f, 0.0f});
    set_head_bias(m.nets[0], 1, {50.0f, 0, 0, 0, 0, 0});
    const auto p = infer(m, small_data().windows[1]);
    for (const auto& pt : p.points) {
        if (pt.in_map) {
            EXPECT_EQ(pt.semseg, SemSegLabel::Background);
        }
    }
    // Scores are untouched by alignment.
    ASSERT_FALSE(p.semseg_scores.empty());
    EXPECT_GT(p.semseg_scores[0], 0.99f);
}

TEST(Infer, Deterministic) {
    auto m = build_model(Variant::MultiHead, tiny_options());
    m.trained = true;
    const auto& w = small_data().windows[2];
    const auto a = infer(m, w), b = infer(m, w);
    EXPECT_EQ(a.clutter_scores, b.clutter_scores);
    EXPECT_EQ(a.semseg_scores, b.semseg_scores);
}

TEST(Train, LossDecreasesAndIsReproducible) {
    auto run = [] {
        auto m = build_model(Variant::LabelFusion7, tiny_options());
        std::vector<double> losses;
        auto tc = quick();
        tc.epochs = 3;
        tc.on_epoch = [&](int, double l) { losses.push_back(l); };
        train(m, small_data(), tc);
        EXPECT_TRUE(m.trained);
        return std::pair{losses, snapshot(m.nets[0].net)};
    };
    const auto [l1, p1] = run();
    const auto [l2, p2] = run();
    ASSERT_EQ(l1.size(), 3u);
    EXPECT_EQ(l1, l2);
    EXPECT_EQ(p1, p2);
    for (double l : l1) EXPECT_TRUE(std::isfinite(l));
    EXPECT_LT(l1.back(), l1.front());
}

TEST(Train, SeriesFrontStaysFrozen) {
    const auto opts = tiny_options();
    auto front = build_model(Variant::SingleTaskClutter, opts);
    train(front, small_data(), quick());
    auto series = series_from_front(front, opts);
    const auto before = snapshot(series.nets[0].net);
    const auto seg_before = snapshot(series.nets[1].net);
    train(series, small_data(), quick());
    EXPECT_EQ(snapshot(series.nets[0].net), before);
    EXPECT_NE(snapshot(series.nets[1].net), seg_before);
    EXPECT_TRUE(series.trained);

    auto untrained = build_model(Variant::SingleTaskClutter, opts);
    EXPECT_THROW(series_from_front(untrained, opts), InputError);
    auto other = opts;
    other.backbone.wide = 6;
    EXPECT_THROW(series_from_front(front, other), InputError);
}

TEST(Train, RejectsBadInput) {
    auto m = build_model(Variant::SingleTaskSemSeg, tiny_options());
    EXPECT_THROW(train(m, Dataset{}, quick()), InputError);
    auto tc = quick();
    tc.class_weights = {{1.0, 2.0}};
    EXPECT_THROW(train(m, small_data(), tc), InputError);
    std::vector<std::vector<Scan>> none;
    EXPECT_THROW(make_dataset(none, 0), InputError);
}

TEST(Checkpoint, RoundTrip) {
    auto opts = tiny_options();
    auto m = build_model(Variant::SeriesConnection, opts);
    m.trained = m.front_trained = true;
    m.nets[1].class_weights[0][2] = 1.25;
    const auto path = temp_file("roundtrip.rmtw");
    save_model(path, m, R"({"note": 1})");
    const auto back = load_model(path);
    EXPECT_EQ(back.variant, m.variant);
    EXPECT_EQ(back.grid.rows, 32);
    EXPECT_EQ(back.grid.x_min, m.grid.x_min);
    EXPECT_TRUE(back.trained);
    EXPECT_EQ(back.nets[1].class_weights, m.nets[1].class_weights);
    for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(snapshot(back.nets[k].net), snapshot(m.nets[k].net));
    const auto& w = small_data().windows[0];
    EXPECT_EQ(infer(back, w).semseg_scores, infer(m, w).semseg_scores);
    fs::remove(path);
}

TEST(Checkpoint, CorruptionIsDetected) {
    auto m = build_model(Variant::LabelFusion9v1, tiny_options());
    const auto path = temp_file("corrupt.rmtw");
    save_model(path, m);
    std::string bytes;
    {
        std::ifstream in(path, std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto write = [&](const std::string& b) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << b;
    };
    write("XXXXX" + bytes.substr(5));
    EXPECT_THROW(load_model(path), InputError);
    write(bytes.substr(0, bytes.size() - 4));
    EXPECT_THROW(load_model(path), InputError);
    write(bytes + "junk");
    EXPECT_THROW(load_model(path), InputError);
    std::string bad_json = bytes;
    bad_json[6 + 8] = '[';
    write(bad_json);
    EXPECT_THROW(load_model(path), InputError);
    std::string huge = bytes;
    huge[6 + 7] = '\x7f';
    write(huge);
    EXPECT_THROW(load_model(path), InputError);
    write(bytes);
    EXPECT_NO_THROW(load_model(path));
    fs::remove(path);
    EXPECT_THROW(load_model(path), InputError);
}
