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

#ifndef RADARSEG_PIPELINE_HPP
#define RADARSEG_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radarseg/ingest.hpp"
#include "radarseg/nn/loss.hpp"
#include "radarseg/nn/network.hpp"
#include "radarseg/raster.hpp"

namespace radarseg {

enum class Variant : std::uint8_t {
    SingleTaskClutter,
    SingleTaskSemSeg,
    SeriesConnection,
    MultiHead,
    LabelFusion7,
    LabelFusion9v1,
    LabelFusion9v2,
};

constexpr std::array<Variant, 7> kAllVariants{Variant::SingleTaskClutter, Variant::SingleTaskSemSeg,
                                              Variant::SeriesConnection,  Variant::MultiHead,
                                              Variant::LabelFusion7,      Variant::LabelFusion9v1,
                                              Variant::LabelFusion9v2};

std::string_view variant_name(Variant v) noexcept;
/// Accepts the canonical names plus the aliases `single_task` (semantic
/// segmentation) and `label_fusion` (seven classes).
std::optional<Variant> parse_variant(std::string_view name) noexcept;

/// Output vocabulary of one classification head.
enum class HeadTask : std::uint8_t { Clutter, SemSeg, Fused7, Fused9 };

int head_classes(HeadTask t) noexcept;
std::string_view head_task_name(HeadTask t) noexcept;

/// Training target index of a detection for a head, or nn::kIgnoreTarget.
int target_index(HeadTask t, const Detection& d) noexcept;

/// Fused label predicted by class `index` of a fused head.
FusedLabel fused_from_index(HeadTask t, int index);

/// Default loss weights per head class.
std::vector<double> default_class_weights(HeadTask t);

/// One network of a model with the task of each of its heads.
struct ModelNet {
    nn::Network<float> net;
    std::vector<HeadTask> tasks;
    std::vector<std::vector<double>> class_weights;  // per head
};

struct Model {
    Variant variant = Variant::SingleTaskSemSeg;
    GridConfig grid;
    // Series connection: [0] clutter front model, [1] segmentation model.
    std::vector<ModelNet> nets;
    bool trained = false;
    bool front_trained = false;  // series stage one finished
    std::uint64_t seed = 0;

    std::size_t parameter_count() const;
};

struct ModelOptions {
    GridConfig grid;
    nn::BackboneConfig backbone;
    // Private 3x3 layers in each multi-head branch; the two branches together
    // add two conv layers over the single-task network.
    int branch_convs = 1;
    std::uint64_t seed = 1;
};

Model build_model(Variant v, const ModelOptions& opts);

/// Series model whose front network is a copy of an already trained
/// single-task clutter model. train() then runs only the second stage.
Model series_from_front(const Model& clutter_model, const ModelOptions& opts);

struct TrainConfig {
    int epochs = 20;
    int batch_size = 2;
    double lr_min = 3e-4;
    double lr_max = 3e-3;
    int epochs_per_cycle = 2;
    double gamma = 2.0;
    std::uint64_t seed = 1;
    // Per-variant loss weights override (head order), empty = defaults.
    std::vector<std::vector<double>> class_weights;
    std::function<void(int epoch, double mean_loss)> on_epoch;
};

/// Accumulated windows of one or more sequences, in sequence order.
struct Dataset {
    std::vector<PointCloudWindow> windows;
};

/// Keeps every `stride`-th window of each sequence, starting with its first.
Dataset make_dataset(std::span<const std::vector<Scan>> sequences, int stride = 1);

/// Loss cell targets of one grid for one head: per cell the label of the
/// latest-scan detection with the highest RCS (ties: higher class weight),
/// or kIgnoreTarget for cells without latest-scan detections.
std::vector<int> cell_targets(const GridMap& grid, const PointCloudWindow& window, HeadTask task,
                              std::span<const double> weights);

/// Class weights proportional to the inverse frequency of the nine fused
/// classes over the training loss cells, anchored at Stationary = 0.70.
std::vector<double> frequency_weights(const Dataset& data, const GridConfig& grid);

/// Trains in place. Throws InputError when the data lacks required labels.
void train(Model& model, const Dataset& data, const TrainConfig& tc);

/// Network input (1 x rows x cols x 5) of a grid.
nn::Tensor<float> grid_tensor(const GridMap& grid);

struct PointPrediction {
    std::optional<ClutterLabel> clutter;
    std::optional<SemSegLabel> semseg;
    std::optional<FusedLabel> fused;
    bool in_map = true;
    bool removed = false;  // series connection: deleted as clutter before segmentation
};

struct DualPrediction {
    std::vector<PointPrediction> points;
    // Softmax scores per detection, row-major points x classes; empty when the
    // variant has no such head. The fused scores cover the fused head.
    std::vector<float> clutter_scores;
    std::vector<float> semseg_scores;
    std::vector<float> fused_scores;
};

/// Forces Background wherever the clutter prediction is Clutter or Stationary.
/// Touches only discrete labels, never scores.
DualPrediction align_predictions(DualPrediction p);

/// Pure function of (model, window). Safe to call concurrently.
DualPrediction infer(const Model& model, const PointCloudWindow& window);

/// Checkpoint I/O. Layout: "RMTW1\n", u64 little-endian header length, JSON
/// header, then raw little-endian float32 parameter blocks in declaration order.
void save_model(const std::filesystem::path& path, const Model& model, const std::string& extra_json = "{}");
Model load_model(const std::filesystem::path& path);

}  // namespace radarseg

#endif  // RADARSEG_PIPELINE_HPP
