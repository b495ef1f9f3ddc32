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

#ifndef RADARSEG_EVALBENCH_HPP
#define RADARSEG_EVALBENCH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radarseg/pipeline.hpp"

namespace radarseg {

enum class EvalTask : std::uint8_t { Clutter, SemSeg, Fused };

std::string_view eval_task_name(EvalTask t) noexcept;

/// Truth rows x prediction columns. Row and column ids are label indices of
/// the task's label enum; columns may hold classes that have no row (a
/// semantic segmentation Unlabeled prediction) and rows may lack a column
/// (nine fused truth classes against a seven-class predictor).
struct ConfusionMatrix {
    std::vector<int> row_ids;
    std::vector<int> col_ids;
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;
    std::vector<std::int64_t> counts;  // row-major

    std::size_t rows() const noexcept { return row_ids.size(); }
    std::size_t cols() const noexcept { return col_ids.size(); }
    std::int64_t at(std::size_t r, std::size_t c) const { return counts.at(r * cols() + c); }
    std::int64_t row_sum(std::size_t r) const;
    std::int64_t col_sum(std::size_t c) const;
    std::int64_t total() const;
    /// Row-normalized percentages; empty rows stay all zero.
    std::vector<double> row_percent() const;
};

struct ClassMetrics {
    std::string name;
    std::int64_t support = 0;    // truth count
    std::int64_t predicted = 0;  // prediction count
    std::int64_t true_positive = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // False when the class occurs in neither truth nor prediction; such
    // classes stay out of the macro means.
    bool present = false;
};

struct MetricsReport {
    EvalTask task = EvalTask::SemSeg;
    std::vector<ClassMetrics> classes;  // one per truth row
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double micro_accuracy = 0.0;
    std::int64_t samples = 0;
    ConfusionMatrix confusion;
};

/// Truth label index of a detection for a task, nullopt when not scored.
std::optional<int> truth_index(EvalTask task, const Detection& d) noexcept;

/// Predicted label index for a task, nullopt when the variant makes no such
/// prediction. Removed series detections count as Background.
std::optional<int> prediction_index(EvalTask task, const PointPrediction& p) noexcept;

/// Streams (window, prediction) pairs into a confusion matrix.
///
/// Scored detections: latest scan, inside the grid, with a truth label for
/// the task (semantic segmentation skips Unlabeled truth).
class ConfusionAccumulator {
public:
    /// `fused_classes` selects the fused prediction columns: 7 or 9.
    explicit ConfusionAccumulator(EvalTask task, int fused_classes = kNumFusedLabels);

    /// Throws ShapeError when the prediction does not match the window, and
    /// InputError when a scored detection has no prediction for the task.
    void add(const PointCloudWindow& window, const DualPrediction& pred);
    /// Adds one pair of label indices. Unknown columns throw ShapeError.
    void add_pair(int truth, int pred);

    EvalTask task() const noexcept { return task_; }
    MetricsReport report() const;

private:
    EvalTask task_;
    ConfusionMatrix cm_;
};

/// Metrics of a variant over a set of windows and their predictions.
MetricsReport compute_metrics(std::span<const PointCloudWindow> windows, std::span<const DualPrediction> preds,
                              EvalTask task, int fused_classes = kNumFusedLabels);

/// Metrics derived from an existing confusion matrix.
MetricsReport metrics_from_confusion(EvalTask task, ConfusionMatrix cm);

/// Tasks a variant's predictions can be scored on, with the fused column count.
std::vector<EvalTask> eval_tasks(Variant v);
int fused_prediction_classes(Variant v) noexcept;

struct LatencyStats {
    std::string variant;
    double mean_ms = 0.0;
    double median_ms = 0.0;
    double p99_ms = 0.0;
    std::int64_t runs = 0;
    double ratio = 1.0;  // median over the baseline median
};

struct LatencyReport {
    std::string baseline;
    int threads = 1;
    std::vector<LatencyStats> rows;
};

/// End-to-end time per window: rasterize, forward, scatter, alignment or
/// mapping. Runs `warmup` (at least 10) untimed windows first, then every
/// window `repeats` times, with one OpenMP worker.
LatencyStats benchmark(const Model& model, std::span<const PointCloudWindow> windows, int repeats, int warmup = 10);

/// Benchmarks several models over identical windows, interleaved per window
/// so drift affects every variant equally. Ratios are relative to the first
/// single-task model, or to the first model when there is none.
LatencyReport benchmark_variants(std::span<const Model* const> models, std::span<const PointCloudWindow> windows,
                                 int repeats, int warmup = 10);

/// p-quantile (0..1) with linear interpolation; empty input gives 0.
double quantile(std::vector<double> values, double p);

std::string metrics_json(const MetricsReport& r, int indent = 2);
std::string latency_json(const LatencyReport& r, int indent = 2);
/// Per-class table: class,support,predicted,precision,recall,f1.
std::string metrics_csv(const MetricsReport& r);
/// Row-normalized confusion matrix with a header row of prediction names.
std::string confusion_csv(const ConfusionMatrix& cm);
/// variant,task,macro_precision,macro_recall,macro_f1 summary rows.
std::string summary_csv(std::span<const std::pair<std::string, MetricsReport>> rows);
std::string latency_csv(const LatencyReport& r);

/// Heatmap of the row-normalized matrix, percentages printed in each cell.
std::string confusion_svg(const ConfusionMatrix& cm, const std::string& title);

/// Occupied cells of a grid colored by class (-1 = input only), for viz.
std::string grid_svg(const GridMap& grid, std::span<const int> cell_classes, std::span<const std::string> class_names,
                     const std::string& title);

}  // namespace radarseg

#endif  // RADARSEG_EVALBENCH_HPP
