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

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "radarseg/evalbench.hpp"

namespace radarseg {

namespace {

using Clock = std::chrono::steady_clock;

class SingleWorker {
public:
    SingleWorker() : saved_(omp_get_max_threads()) { omp_set_num_threads(1); }
    ~SingleWorker() { omp_set_num_threads(saved_); }
    SingleWorker(const SingleWorker&) = delete;
    SingleWorker& operator=(const SingleWorker&) = delete;

private:
    int saved_;
};

double run_once(const Model& m, const PointCloudWindow& w) {
    const auto t0 = Clock::now();
    volatile std::size_t sink = infer(m, w).points.size();
    (void)sink;
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

LatencyStats summarize(const Model& m, std::vector<double> times) {
    LatencyStats s;
    s.variant = std::string(variant_name(m.variant));
    s.runs = static_cast<std::int64_t>(times.size());
    if (!times.empty()) s.mean_ms = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
    s.median_ms = quantile(times, 0.5);
    s.p99_ms = quantile(std::move(times), 0.99);
    return s;
}

}  // namespace

double quantile(std::vector<double> values, double p) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(p, 0.0, 1.0) * (values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

LatencyStats benchmark(const Model& model, std::span<const PointCloudWindow> windows, int repeats, int warmup) {
    const Model* one[] = {&model};
    return benchmark_variants(one, windows, repeats, warmup).rows.front();
}

LatencyReport benchmark_variants(std::span<const Model* const> models, std::span<const PointCloudWindow> windows,
                                 int repeats, int warmup) {
    if (models.empty()) throw InputError("benchmark needs at least one model");
    if (windows.empty()) throw InputError("benchmark needs at least one window");
    if (repeats < 1) throw InputError("benchmark repeats must be >= 1");
    SingleWorker pin;
    warmup = std::max(warmup, 10);
    for (int i = 0; i < warmup; ++i)
        for (const Model* m : models) run_once(*m, windows[static_cast<std::size_t>(i) % windows.size()]);

    std::vector<std::vector<double>> times(models.size());
    for (int r = 0; r < repeats; ++r)
        for (const auto& w : windows)
            for (std::size_t k = 0; k < models.size(); ++k) times[k].push_back(run_once(*models[k], w));

    LatencyReport rep;
    rep.threads = 1;
    std::size_t base = 0;
    for (std::size_t k = 0; k < models.size(); ++k) {
        const Variant v = models[k]->variant;
        if (v == Variant::SingleTaskSemSeg || v == Variant::SingleTaskClutter) {
            base = k;
            break;
        }
    }
    for (std::size_t k = 0; k < models.size(); ++k) rep.rows.push_back(summarize(*models[k], std::move(times[k])));
    rep.baseline = rep.rows[base].variant;
    const double base_ms = rep.rows[base].median_ms;
    for (auto& row : rep.rows) row.ratio = base_ms > 0.0 ? row.median_ms / base_ms : 0.0;
    return rep;
}

}  // namespace radarseg
