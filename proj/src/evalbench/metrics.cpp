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

#include <algorithm>
#include <numeric>

#include "radarseg/evalbench.hpp"

namespace radarseg {

std::string_view eval_task_name(EvalTask t) noexcept {
    switch (t) {
        case EvalTask::Clutter: return "clutter";
        case EvalTask::SemSeg: return "semseg";
        case EvalTask::Fused: return "fused";
    }
    return "unknown";
}

std::int64_t ConfusionMatrix::row_sum(std::size_t r) const {
    std::int64_t s = 0;
    for (std::size_t c = 0; c < cols(); ++c) s += at(r, c);
    return s;
}

std::int64_t ConfusionMatrix::col_sum(std::size_t c) const {
    std::int64_t s = 0;
    for (std::size_t r = 0; r < rows(); ++r) s += at(r, c);
    return s;
}

std::int64_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }

std::vector<double> ConfusionMatrix::row_percent() const {
    std::vector<double> out(counts.size(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
        const std::int64_t n = row_sum(r);
        if (n == 0) continue;
        for (std::size_t c = 0; c < cols(); ++c) out[r * cols() + c] = 100.0 * at(r, c) / n;
    }
    return out;
}

std::optional<int> truth_index(EvalTask task, const Detection& d) noexcept {
    switch (task) {
        case EvalTask::Clutter:
            if (d.clutter_label) return static_cast<int>(*d.clutter_label);
            break;
        case EvalTask::SemSeg:
            if (d.semseg_label && *d.semseg_label != SemSegLabel::Unlabeled) return static_cast<int>(*d.semseg_label);
            break;
        case EvalTask::Fused:
            if (d.fused_label) return static_cast<int>(*d.fused_label);
            break;
    }
    return std::nullopt;
}

std::optional<int> prediction_index(EvalTask task, const PointPrediction& p) noexcept {
    switch (task) {
        case EvalTask::Clutter:
            if (p.clutter) return static_cast<int>(*p.clutter);
            break;
        case EvalTask::SemSeg:
            if (p.removed) return static_cast<int>(SemSegLabel::Background);
            if (p.semseg) return static_cast<int>(*p.semseg);
            break;
        case EvalTask::Fused:
            if (p.fused) return static_cast<int>(*p.fused);
            break;
    }
    return std::nullopt;
}

namespace {

ConfusionMatrix empty_matrix(EvalTask task, int fused_classes) {
    ConfusionMatrix cm;
    switch (task) {
        case EvalTask::Clutter:
            for (ClutterLabel l : kAllClutterLabels) {
                cm.row_ids.push_back(static_cast<int>(l));
                cm.row_names.emplace_back(to_string(l));
            }
            cm.col_ids = cm.row_ids;
            cm.col_names = cm.row_names;
            break;
        case EvalTask::SemSeg:
            for (SemSegLabel l : kAllSemSegLabels) {
                if (l == SemSegLabel::Unlabeled) continue;
                cm.row_ids.push_back(static_cast<int>(l));
                cm.row_names.emplace_back(to_string(l));
            }
            cm.col_ids = cm.row_ids;
            cm.col_names = cm.row_names;
            // Predicted Unlabeled (a mapped OtherObject) is always an error.
            cm.col_ids.push_back(static_cast<int>(SemSegLabel::Unlabeled));
            cm.col_names.emplace_back(to_string(SemSegLabel::Unlabeled));
            break;
        case EvalTask::Fused:
            if (fused_classes != 7 && fused_classes != kNumFusedLabels)
                throw InputError("fused prediction classes must be 7 or 9");
            for (FusedLabel l : kAllFusedLabels) {
                cm.row_ids.push_back(static_cast<int>(l));
                cm.row_names.emplace_back(to_string(l));
                if (fused_classes == 7 && (l == FusedLabel::OtherObject || l == FusedLabel::InaccurateMeasurement))
                    continue;
                cm.col_ids.push_back(static_cast<int>(l));
                cm.col_names.emplace_back(to_string(l));
            }
            break;
    }
    cm.counts.assign(cm.rows() * cm.cols(), 0);
    return cm;
}

// Drops prediction columns that have no row and no count.
ConfusionMatrix prune_extra_columns(ConfusionMatrix cm) {
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < cm.cols(); ++c) {
        const bool has_row = std::find(cm.row_ids.begin(), cm.row_ids.end(), cm.col_ids[c]) != cm.row_ids.end();
        if (has_row || cm.col_sum(c) > 0) keep.push_back(c);
    }
    if (keep.size() == cm.cols()) return cm;
    ConfusionMatrix out;
    out.row_ids = cm.row_ids;
    out.row_names = cm.row_names;
    for (std::size_t c : keep) {
        out.col_ids.push_back(cm.col_ids[c]);
        out.col_names.push_back(cm.col_names[c]);
    }
    out.counts.assign(out.rows() * out.cols(), 0);
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t k = 0; k < keep.size(); ++k) out.counts[r * out.cols() + k] = cm.at(r, keep[k]);
    return out;
}

}  // namespace

ConfusionAccumulator::ConfusionAccumulator(EvalTask task, int fused_classes)
    : task_(task), cm_(empty_matrix(task, fused_classes)) {}

void ConfusionAccumulator::add_pair(int truth, int pred) {
    const auto r = std::find(cm_.row_ids.begin(), cm_.row_ids.end(), truth);
    const auto c = std::find(cm_.col_ids.begin(), cm_.col_ids.end(), pred);
    if (r == cm_.row_ids.end() || c == cm_.col_ids.end())
        throw ShapeError("label pair (" + std::to_string(truth) + ", " + std::to_string(pred) + ") outside the " +
                         std::string(eval_task_name(task_)) + " confusion matrix");
    cm_.counts[static_cast<std::size_t>(r - cm_.row_ids.begin()) * cm_.cols() +
               static_cast<std::size_t>(c - cm_.col_ids.begin())] += 1;
}

void ConfusionAccumulator::add(const PointCloudWindow& window, const DualPrediction& pred) {
    if (pred.points.size() != window.points.size())
        throw ShapeError("prediction has " + std::to_string(pred.points.size()) + " points, window has " +
                         std::to_string(window.points.size()));
    for (std::size_t i = 0; i < window.points.size(); ++i) {
        const WindowPoint& wp = window.points[i];
        const PointPrediction& pp = pred.points[i];
        if (!wp.is_latest_scan || !pp.in_map) continue;
        const auto t = truth_index(task_, wp.detection);
        if (!t) continue;
        const auto p = prediction_index(task_, pp);
        if (!p)
            throw InputError("no " + std::string(eval_task_name(task_)) + " prediction for a scored detection");
        add_pair(*t, *p);
    }
}

MetricsReport ConfusionAccumulator::report() const { return metrics_from_confusion(task_, cm_); }

MetricsReport metrics_from_confusion(EvalTask task, ConfusionMatrix cm) {
    cm = prune_extra_columns(std::move(cm));
    MetricsReport r;
    r.task = task;
    r.samples = cm.total();
    std::int64_t trace = 0;
    double sp = 0.0, sr = 0.0, sf = 0.0;
    int present = 0;
    for (std::size_t i = 0; i < cm.rows(); ++i) {
        ClassMetrics m;
        m.name = cm.row_names[i];
        m.support = cm.row_sum(i);
        const auto c = std::find(cm.col_ids.begin(), cm.col_ids.end(), cm.row_ids[i]);
        if (c != cm.col_ids.end()) {
            const auto ci = static_cast<std::size_t>(c - cm.col_ids.begin());
            m.predicted = cm.col_sum(ci);
            m.true_positive = cm.at(i, ci);
        }
        trace += m.true_positive;
        m.precision = m.predicted > 0 ? static_cast<double>(m.true_positive) / m.predicted : 0.0;
        m.recall = m.support > 0 ? static_cast<double>(m.true_positive) / m.support : 0.0;
        m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
        m.present = m.support > 0 || m.predicted > 0;
        if (m.present) {
            sp += m.precision;
            sr += m.recall;
            sf += m.f1;
            ++present;
        }
        r.classes.push_back(std::move(m));
    }
    if (present > 0) {
        r.macro_precision = sp / present;
        r.macro_recall = sr / present;
        r.macro_f1 = sf / present;
    }
    r.micro_accuracy = r.samples > 0 ? static_cast<double>(trace) / r.samples : 0.0;
    r.confusion = std::move(cm);
    return r;
}

MetricsReport compute_metrics(std::span<const PointCloudWindow> windows, std::span<const DualPrediction> preds,
                              EvalTask task, int fused_classes) {
    if (windows.size() != preds.size())
        throw ShapeError(std::to_string(preds.size()) + " predictions for " + std::to_string(windows.size()) +
                         " windows");
    ConfusionAccumulator acc(task, fused_classes);
    for (std::size_t i = 0; i < windows.size(); ++i) acc.add(windows[i], preds[i]);
    return acc.report();
}

std::vector<EvalTask> eval_tasks(Variant v) {
    switch (v) {
        case Variant::SingleTaskClutter: return {EvalTask::Clutter};
        case Variant::SingleTaskSemSeg: return {EvalTask::SemSeg};
        case Variant::SeriesConnection:
        case Variant::MultiHead: return {EvalTask::Clutter, EvalTask::SemSeg};
        case Variant::LabelFusion7:
        case Variant::LabelFusion9v1:
        case Variant::LabelFusion9v2: return {EvalTask::Clutter, EvalTask::SemSeg, EvalTask::Fused};
    }
    return {};
}

int fused_prediction_classes(Variant v) noexcept { return v == Variant::LabelFusion7 ? 7 : kNumFusedLabels; }

}  // namespace radarseg
