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

#include "radarseg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <bit>
#include <cstring>
#include <fstream>
#include <random>

#include "json.hpp"

#include "radarseg/nn/loss.hpp"
#include "radarseg/nn/optim.hpp"

namespace radarseg {

namespace {

constexpr double kObjectWeight = 4.93;
constexpr double kClutterWeight = 3.52;
constexpr double kStationaryWeight = 0.70;

}  // namespace

std::string_view variant_name(Variant v) noexcept {
    switch (v) {
        case Variant::SingleTaskClutter: return "single_task_clutter";
        case Variant::SingleTaskSemSeg: return "single_task_semseg";
        case Variant::SeriesConnection: return "series";
        case Variant::MultiHead: return "multi_head";
        case Variant::LabelFusion7: return "label_fusion7";
        case Variant::LabelFusion9v1: return "label_fusion9v1";
        case Variant::LabelFusion9v2: return "label_fusion9v2";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
    if (name == "single_task") return Variant::SingleTaskSemSeg;
    if (name == "label_fusion") return Variant::LabelFusion7;
    for (Variant v : kAllVariants)
        if (variant_name(v) == name) return v;
    return std::nullopt;
}

int head_classes(HeadTask t) noexcept {
    switch (t) {
        case HeadTask::Clutter: return kNumClutterLabels;
        case HeadTask::SemSeg: return kNumSemSegLabels - 1;
        case HeadTask::Fused7: return 7;
        case HeadTask::Fused9: return kNumFusedLabels;
    }
    return 0;
}

std::string_view head_task_name(HeadTask t) noexcept {
    switch (t) {
        case HeadTask::Clutter: return "clutter";
        case HeadTask::SemSeg: return "semseg";
        case HeadTask::Fused7: return "fused7";
        case HeadTask::Fused9: return "fused9";
    }
    return "unknown";
}

int target_index(HeadTask t, const Detection& d) noexcept {
    switch (t) {
        case HeadTask::Clutter:
            return d.clutter_label ? static_cast<int>(*d.clutter_label) : nn::kIgnoreTarget;
        case HeadTask::SemSeg:
            if (!d.semseg_label || *d.semseg_label == SemSegLabel::Unlabeled) return nn::kIgnoreTarget;
            return static_cast<int>(*d.semseg_label);
        case HeadTask::Fused7:
            if (!d.fused_label) return nn::kIgnoreTarget;
            switch (*d.fused_label) {
                case FusedLabel::OtherObject:
                case FusedLabel::InaccurateMeasurement:
                    return nn::kIgnoreTarget;
                case FusedLabel::Clutter: return 5;
                case FusedLabel::Stationary: return 6;
                default: return static_cast<int>(*d.fused_label);
            }
        case HeadTask::Fused9:
            return d.fused_label ? static_cast<int>(*d.fused_label) : nn::kIgnoreTarget;
    }
    return nn::kIgnoreTarget;
}

FusedLabel fused_from_index(HeadTask t, int index) {
    if (t == HeadTask::Fused9 && index >= 0 && index < kNumFusedLabels) return static_cast<FusedLabel>(index);
    if (t == HeadTask::Fused7 && index >= 0 && index < 7) {
        if (index == 5) return FusedLabel::Clutter;
        if (index == 6) return FusedLabel::Stationary;
        return static_cast<FusedLabel>(index);
    }
    throw ShapeError("class index " + std::to_string(index) + " invalid for head " + std::string(head_task_name(t)));
}

std::vector<double> default_class_weights(HeadTask t) {
    switch (t) {
        case HeadTask::Clutter:
            return {kObjectWeight, kClutterWeight, kStationaryWeight};
        case HeadTask::SemSeg:
            return {kObjectWeight, kObjectWeight, kObjectWeight, kObjectWeight, kObjectWeight, kStationaryWeight};
        case HeadTask::Fused7:
            return {kObjectWeight, kObjectWeight, kObjectWeight, kObjectWeight,
                    kObjectWeight, kClutterWeight, kStationaryWeight};
        case HeadTask::Fused9: {
            // New classes weighted like object types.
            std::vector<double> w(kNumFusedLabels, kObjectWeight);
            w[static_cast<int>(FusedLabel::Clutter)] = kClutterWeight;
            w[static_cast<int>(FusedLabel::Stationary)] = kStationaryWeight;
            return w;
        }
    }
    return {};
}

std::size_t Model::parameter_count() const {
    std::size_t n = 0;
    for (const auto& mn : nets) n += mn.net.parameter_count();
    return n;
}

namespace {

ModelNet make_net(const ModelOptions& opts, std::vector<HeadTask> tasks, int branch_convs, std::uint64_t seed) {
    std::vector<nn::HeadSpec> heads;
    std::vector<std::vector<double>> weights;
    for (HeadTask t : tasks) {
        heads.push_back({std::string(head_task_name(t)), head_classes(t)});
        weights.push_back(default_class_weights(t));
    }
    return {nn::Network<float>(opts.backbone, std::move(heads), branch_convs, seed), std::move(tasks),
            std::move(weights)};
}

}  // namespace

Model build_model(Variant v, const ModelOptions& opts) {
    opts.grid.validate();
    Model m;
    m.variant = v;
    m.grid = opts.grid;
    m.seed = opts.seed;
    switch (v) {
        case Variant::SingleTaskClutter:
            m.nets.push_back(make_net(opts, {HeadTask::Clutter}, 0, opts.seed));
            break;
        case Variant::SingleTaskSemSeg:
            m.nets.push_back(make_net(opts, {HeadTask::SemSeg}, 0, opts.seed));
            break;
        case Variant::SeriesConnection:
            m.nets.push_back(make_net(opts, {HeadTask::Clutter}, 0, opts.seed));
            m.nets.push_back(make_net(opts, {HeadTask::SemSeg}, 0, opts.seed + 1));
            break;
        case Variant::MultiHead:
            m.nets.push_back(make_net(opts, {HeadTask::Clutter, HeadTask::SemSeg}, opts.branch_convs, opts.seed));
            break;
        case Variant::LabelFusion7:
            m.nets.push_back(make_net(opts, {HeadTask::Fused7}, 0, opts.seed));
            break;
        case Variant::LabelFusion9v1:
        case Variant::LabelFusion9v2:
            m.nets.push_back(make_net(opts, {HeadTask::Fused9}, 0, opts.seed));
            break;
    }
    return m;
}

Model series_from_front(const Model& clutter_model, const ModelOptions& opts) {
    if (clutter_model.variant != Variant::SingleTaskClutter || !clutter_model.trained)
        throw InputError("series front must be a trained single_task_clutter model");
    if (!(clutter_model.nets[0].net.config() == opts.backbone))
        throw InputError("series front backbone differs from the requested backbone");
    Model m = build_model(Variant::SeriesConnection, opts);
    m.grid = clutter_model.grid;
    m.nets[0] = clutter_model.nets[0];
    m.front_trained = true;
    return m;
}

Dataset make_dataset(std::span<const std::vector<Scan>> sequences, int stride) {
    if (stride < 1) throw InputError("window stride must be >= 1");
    Dataset d;
    for (const auto& seq : sequences) {
        auto w = windows_from_sequence(seq);
        for (std::size_t i = 0; i < w.size(); i += static_cast<std::size_t>(stride))
            d.windows.push_back(std::move(w[i]));
    }
    return d;
}

nn::Tensor<float> grid_tensor(const GridMap& grid) {
    nn::Tensor<float> t({1, grid.rows(), grid.cols(), kNumChannels});
    std::copy(grid.features.begin(), grid.features.end(), t.data());
    return t;
}

std::vector<int> cell_targets(const GridMap& grid, const PointCloudWindow& window, HeadTask task,
                              std::span<const double> weights) {
    const int cells = grid.config.cells();
    std::vector<int> targets(cells, nn::kIgnoreTarget);
    for (int c = 0; c < cells; ++c) {
        if (!grid.latest_mask[c]) continue;
        const Detection* best = nullptr;
        double best_w = 0.0;
        for (std::int32_t i : grid.points_in(c)) {
            const WindowPoint& p = window.points[i];
            if (!p.is_latest_scan) continue;
            const int t = target_index(task, p.detection);
            const double w = t == nn::kIgnoreTarget ? 0.0 : weights[t];
            if (!best || p.detection.rcs > best->rcs || (p.detection.rcs == best->rcs && w > best_w)) {
                best = &p.detection;
                best_w = w;
            }
        }
        if (best) targets[c] = target_index(task, *best);
    }
    return targets;
}

std::vector<double> frequency_weights(const Dataset& data, const GridConfig& grid) {
    const auto base = default_class_weights(HeadTask::Fused9);
    std::vector<double> counts(kNumFusedLabels, 0.0);
    for (const auto& w : data.windows) {
        const GridMap g = rasterize(w, grid);
        for (int t : cell_targets(g, w, HeadTask::Fused9, base))
            if (t != nn::kIgnoreTarget) counts[t] += 1.0;
    }
    const int stat = static_cast<int>(FusedLabel::Stationary);
    if (counts[stat] == 0.0) throw InputError("frequency weights need Stationary samples");
    std::vector<double> w(kNumFusedLabels, 0.0);
    double max_w = kStationaryWeight;
    for (int k = 0; k < kNumFusedLabels; ++k) {
        if (counts[k] > 0.0) {
            w[k] = kStationaryWeight * counts[stat] / counts[k];
            max_w = std::max(max_w, w[k]);
        }
    }
    for (auto& v : w)
        if (v == 0.0) v = max_w;
    return w;
}

namespace {

void require_labels(const Dataset& data, const ModelNet& mn) {
    std::size_t usable = 0;
    for (const auto& w : data.windows)
        for (const auto& p : w.points) {
            if (!p.is_latest_scan) continue;
            for (HeadTask t : mn.tasks) {
                const bool has = t == HeadTask::Clutter  ? p.detection.clutter_label.has_value()
                                 : t == HeadTask::SemSeg ? p.detection.semseg_label.has_value()
                                                         : p.detection.fused_label.has_value();
                if (!has)
                    throw InputError("training data lacks " + std::string(head_task_name(t)) +
                                     " labels required by this variant");
            }
            ++usable;
        }
    if (usable == 0) throw InputError("training data has no latest-scan detections");
}

using GridTransform = std::function<GridMap(std::size_t window_index, GridMap grid)>;

void train_net(ModelNet& mn, const GridConfig& grid_cfg, const Dataset& data, const TrainConfig& tc,
               const GridTransform& transform) {
    require_labels(data, mn);
    nn::Network<float>& net = mn.net;
    const std::size_t n = data.windows.size();
    const int batch = std::max(1, tc.batch_size);
    const std::int64_t steps_per_epoch = static_cast<std::int64_t>((n + batch - 1) / batch);
    const std::int64_t total_steps = steps_per_epoch * tc.epochs;
    const int cycles = std::max(1, tc.epochs / std::max(1, tc.epochs_per_cycle));
    const std::size_t heads = mn.tasks.size();

    std::vector<nn::AdamState<float>> adam(net.params().size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(tc.seed);
    nn::Activations<float> acts;
    std::vector<nn::Tensor<float>> grads(heads);

    std::int64_t step = 0;
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        std::size_t loss_n = 0;
        for (std::size_t b0 = 0; b0 < n; b0 += batch, ++step) {
            const std::size_t b1 = std::min(n, b0 + batch);
            net.zero_grad();
            for (std::size_t bi = b0; bi < b1; ++bi) {
                const std::size_t wi = order[bi];
                GridMap g = rasterize(data.windows[wi], grid_cfg);
                if (transform) g = transform(wi, std::move(g));
                net.forward(grid_tensor(g), acts);
                for (std::size_t h = 0; h < heads; ++h) {
                    const auto targets = cell_targets(g, data.windows[wi], mn.tasks[h], mn.class_weights[h]);
                    const float loss =
                        nn::focal_loss(acts.logits[h], targets, mn.class_weights[h], tc.gamma, grads[h]);
                    loss_sum += loss;
                    ++loss_n;
                    // Heads average their task losses; the batch averages windows.
                    const float scale = 1.0f / static_cast<float>(heads * (b1 - b0));
                    for (auto& v : grads[h].values()) v *= scale;
                }
                net.backward(acts, grads);
            }
            const double lr = nn::cyclical_lr(step, total_steps, tc.lr_min, tc.lr_max, cycles);
            for (std::size_t p = 0; p < net.params().size(); ++p) {
                auto& par = net.params()[p];
                nn::adam_step<float>(par.value.values(), par.grad.values(), adam[p], lr);
            }
        }
        if (tc.on_epoch) tc.on_epoch(epoch, loss_n ? loss_sum / loss_n : 0.0);
    }
}

std::vector<int> argmax_cells(const nn::Tensor<float>& logits, const GridMap& grid) {
    const int K = logits.dim(3);
    const int cells = grid.config.cells();
    std::vector<int> out(cells, 0);
    for (int c = 0; c < cells; ++c) {
        if (!grid.occupied(c)) continue;
        const float* z = logits.data() + static_cast<std::size_t>(c) * K;
        out[c] = static_cast<int>(std::max_element(z, z + K) - z);
    }
    return out;
}

// Softmax of each detection's cell, points x K.
std::vector<float> point_scores(const nn::Tensor<float>& logits, const GridMap& grid, std::size_t n_points) {
    const int K = logits.dim(3);
    std::vector<float> out(n_points * K, 0.0f);
    for (std::size_t i = 0; i < n_points; ++i) {
        const int c = grid.point_cell[i];
        if (c < 0) continue;
        const float* z = logits.data() + static_cast<std::size_t>(c) * K;
        const float zmax = *std::max_element(z, z + K);
        float sum = 0.0f;
        for (int k = 0; k < K; ++k) sum += (out[i * K + k] = std::exp(z[k] - zmax));
        for (int k = 0; k < K; ++k) out[i * K + k] /= sum;
    }
    return out;
}

std::vector<std::uint8_t> clutter_mask(const nn::Tensor<float>& logits, const GridMap& grid) {
    const auto cls = argmax_cells(logits, grid);
    std::vector<std::uint8_t> mask(cls.size(), 0);
    for (std::size_t c = 0; c < cls.size(); ++c)
        mask[c] = grid.occupied(static_cast<int>(c)) && cls[c] == static_cast<int>(ClutterLabel::Clutter);
    return mask;
}

}  // namespace

void train(Model& model, const Dataset& data, const TrainConfig& tc) {
    if (data.windows.empty()) throw InputError("training data is empty");
    if (tc.epochs < 0) throw InputError("epochs must be >= 0");
    if (!tc.class_weights.empty()) {
        std::size_t h = 0;
        for (auto& mn : model.nets)
            for (auto& w : mn.class_weights) {
                if (h >= tc.class_weights.size()) break;
                if (tc.class_weights[h].size() != w.size()) throw InputError("class weight count mismatch");
                w = tc.class_weights[h++];
            }
    } else if (model.variant == Variant::LabelFusion9v2) {
        model.nets[0].class_weights[0] = frequency_weights(data, model.grid);
    }

    if (model.variant != Variant::SeriesConnection) {
        train_net(model.nets[0], model.grid, data, tc, {});
        model.trained = true;
        return;
    }

    if (!model.front_trained) {
        train_net(model.nets[0], model.grid, data, tc, {});
        model.front_trained = true;
    }
    // Stage two: the front network is frozen, so its clutter masks are fixed.
    std::vector<std::vector<std::uint8_t>> masks(data.windows.size());
    {
        nn::Activations<float> acts;
        for (std::size_t i = 0; i < data.windows.size(); ++i) {
            const GridMap g = rasterize(data.windows[i], model.grid);
            model.nets[0].net.forward(grid_tensor(g), acts);
            masks[i] = clutter_mask(acts.logits[0], g);
        }
    }
    train_net(model.nets[1], model.grid, data, tc,
              [&](std::size_t wi, GridMap g) { return zero_cells(g, masks[wi]); });
    model.trained = true;
}

DualPrediction align_predictions(DualPrediction p) {
    for (auto& pt : p.points) {
        if (pt.clutter && pt.semseg &&
            (*pt.clutter == ClutterLabel::Clutter || *pt.clutter == ClutterLabel::Stationary))
            pt.semseg = SemSegLabel::Background;
    }
    return p;
}

DualPrediction infer(const Model& model, const PointCloudWindow& window) {
    if (!model.trained) throw InputError("model is not trained");
    const GridMap grid = rasterize(window, model.grid);
    const std::size_t n = window.points.size();
    DualPrediction out;
    out.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.points[i].in_map = grid.point_cell[i] >= 0;

    nn::Activations<float> acts;
    const ModelNet& front = model.nets[0];
    front.net.forward(grid_tensor(grid), acts);

    auto set_from = [&](HeadTask task, const nn::Tensor<float>& logits, const GridMap& g) {
        const auto cls = scatter_back(argmax_cells(logits, g), g);
        auto scores = point_scores(logits, g, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (cls[i] == kOutOfMap) continue;
            PointPrediction& pt = out.points[i];
            switch (task) {
                case HeadTask::Clutter: pt.clutter = static_cast<ClutterLabel>(cls[i]); break;
                case HeadTask::SemSeg: pt.semseg = static_cast<SemSegLabel>(cls[i]); break;
                case HeadTask::Fused7:
                case HeadTask::Fused9: {
                    const FusedLabel f = fused_from_index(task, cls[i]);
                    pt.fused = f;
                    pt.clutter = fused_to_clutter(f);
                    pt.semseg = fused_to_semseg(f);
                    break;
                }
            }
        }
        switch (task) {
            case HeadTask::Clutter: out.clutter_scores = std::move(scores); break;
            case HeadTask::SemSeg: out.semseg_scores = std::move(scores); break;
            default: out.fused_scores = std::move(scores); break;
        }
    };

    for (std::size_t h = 0; h < front.tasks.size(); ++h) set_from(front.tasks[h], acts.logits[h], grid);

    if (model.variant == Variant::SeriesConnection) {
        const auto mask = clutter_mask(acts.logits[0], grid);
        const GridMap cleaned = zero_cells(grid, mask);
        model.nets[1].net.forward(grid_tensor(cleaned), acts);
        set_from(HeadTask::SemSeg, acts.logits[0], cleaned);
        for (std::size_t i = 0; i < n; ++i) {
            if (grid.point_cell[i] >= 0 && cleaned.point_cell[i] < 0) {
                out.points[i].removed = true;
                out.points[i].semseg = SemSegLabel::Background;
            }
        }
    }

    if (model.variant == Variant::MultiHead) out = align_predictions(std::move(out));
    return out;
}

namespace {

constexpr char kMagic[] = "RMTW1\n";
constexpr std::size_t kMagicLen = sizeof(kMagic) - 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

nlohmann::json net_header(const ModelNet& mn) {
    const auto& cfg = mn.net.config();
    nlohmann::json j;
    j["backbone"] = {{"in_channels", cfg.in_channels}, {"wide", cfg.wide},
                     {"narrow", cfg.narrow},           {"deconv_channels", cfg.deconv_channels},
                     {"depth", cfg.depth},             {"kernel", cfg.kernel},
                     {"input_scale", cfg.input_scale}};
    j["branch_convs"] = mn.net.branch_convs();
    nlohmann::json heads = nlohmann::json::array();
    for (std::size_t h = 0; h < mn.tasks.size(); ++h)
        heads.push_back({{"task", head_task_name(mn.tasks[h])},
                         {"classes", mn.net.heads()[h].classes},
                         {"class_weights", mn.class_weights[h]}});
    j["heads"] = heads;
    nlohmann::json params = nlohmann::json::array();
    for (const auto& p : mn.net.params()) params.push_back({{"name", p.name}, {"shape", p.value.shape()}});
    j["params"] = params;
    return j;
}

HeadTask parse_head_task(const std::string& s) {
    for (HeadTask t : {HeadTask::Clutter, HeadTask::SemSeg, HeadTask::Fused7, HeadTask::Fused9})
        if (head_task_name(t) == s) return t;
    throw InputError("checkpoint: unknown head task '" + s + "'");
}

}  // namespace

void save_model(const std::filesystem::path& path, const Model& model, const std::string& extra_json) {
    nlohmann::json h;
    h["format"] = "RMTW1";
    h["variant"] = variant_name(model.variant);
    h["grid"] = {{"cell_size", model.grid.cell_size}, {"rows", model.grid.rows}, {"cols", model.grid.cols},
                 {"x_min", model.grid.x_min},         {"y_min", model.grid.y_min}};
    h["seed"] = model.seed;
    h["trained"] = model.trained;
    h["front_trained"] = model.front_trained;
    h["nets"] = nlohmann::json::array();
    for (const auto& mn : model.nets) h["nets"].push_back(net_header(mn));
    h["extra"] = nlohmann::json::parse(extra_json.empty() ? "{}" : extra_json);
    const std::string header = h.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write checkpoint " + path.string());
    out.write(kMagic, kMagicLen);
    const std::uint64_t len = header.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const auto& mn : model.nets)
        for (const auto& p : mn.net.params())
            out.write(reinterpret_cast<const char*>(p.value.data()),
                      static_cast<std::streamsize>(p.value.size() * sizeof(float)));
    if (!out) throw InputError("failed writing checkpoint " + path.string());
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open checkpoint " + path.string());
    char magic[kMagicLen];
    in.read(magic, kMagicLen);
    if (!in || std::memcmp(magic, kMagic, kMagicLen) != 0) throw InputError("not an RMTW1 checkpoint: " + path.string());
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof len);
    if (!in || len > (1u << 26)) throw InputError("corrupt checkpoint header length");
    std::string header(len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(len));
    if (!in) throw InputError("truncated checkpoint header");

    Model m;
    try {
        const auto h = nlohmann::json::parse(header);
        const auto v = parse_variant(h.at("variant").get<std::string>());
        if (!v) throw InputError("checkpoint: unknown variant");
        m.variant = *v;
        const auto& g = h.at("grid");
        m.grid.cell_size = g.at("cell_size").get<double>();
        m.grid.rows = g.at("rows").get<int>();
        m.grid.cols = g.at("cols").get<int>();
        m.grid.x_min = g.at("x_min").get<double>();
        m.grid.y_min = g.at("y_min").get<double>();
        m.grid.validate();
        m.seed = h.at("seed").get<std::uint64_t>();
        m.trained = h.at("trained").get<bool>();
        m.front_trained = h.at("front_trained").get<bool>();
        for (const auto& nj : h.at("nets")) {
            const auto& b = nj.at("backbone");
            nn::BackboneConfig cfg;
            cfg.in_channels = b.at("in_channels").get<int>();
            cfg.wide = b.at("wide").get<int>();
            cfg.narrow = b.at("narrow").get<int>();
            cfg.deconv_channels = b.at("deconv_channels").get<int>();
            cfg.depth = b.at("depth").get<int>();
            cfg.kernel = b.at("kernel").get<int>();
            cfg.input_scale = b.at("input_scale").get<std::vector<double>>();
            ModelNet mn;
            std::vector<nn::HeadSpec> heads;
            for (const auto& hj : nj.at("heads")) {
                const HeadTask t = parse_head_task(hj.at("task").get<std::string>());
                mn.tasks.push_back(t);
                heads.push_back({std::string(head_task_name(t)), hj.at("classes").get<int>()});
                mn.class_weights.push_back(hj.at("class_weights").get<std::vector<double>>());
            }
            mn.net = nn::Network<float>(cfg, std::move(heads), nj.at("branch_convs").get<int>(), 0);
            const auto& pj = nj.at("params");
            if (pj.size() != mn.net.params().size()) throw InputError("checkpoint: parameter list mismatch");
            for (std::size_t i = 0; i < pj.size(); ++i) {
                const auto& p = mn.net.params()[i];
                if (pj[i].at("name").get<std::string>() != p.name ||
                    pj[i].at("shape").get<std::vector<int>>() != p.value.shape())
                    throw InputError("checkpoint: parameter " + p.name + " mismatch");
            }
            m.nets.push_back(std::move(mn));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("checkpoint header: ") + e.what());
    }
    for (auto& mn : m.nets)
        for (auto& p : mn.net.params()) {
            in.read(reinterpret_cast<char*>(p.value.data()), static_cast<std::streamsize>(p.value.size() * sizeof(float)));
            if (!in) throw InputError("truncated checkpoint parameters");
        }
    if (in.peek() != std::char_traits<char>::eof()) throw InputError("trailing bytes in checkpoint");
    return m;
}

}  // namespace radarseg
