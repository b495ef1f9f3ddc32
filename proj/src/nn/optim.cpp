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

#include "radarseg/nn/optim.hpp"

#include <algorithm>
#include <cmath>

#include "radarseg/core.hpp"

namespace radarseg::nn {

template <typename T>
void adam_step(std::span<T> params, std::span<const T> grads, AdamState<T>& state, double lr,
               const AdamConfig& cfg) {
    if (grads.size() != params.size()) throw ShapeError("adam: gradient size mismatch");
    if (state.m.empty() && !params.empty()) {
        state.m.assign(params.size(), T(0));
        state.v.assign(params.size(), T(0));
    }
    if (state.m.size() != params.size() || state.v.size() != params.size())
        throw ShapeError("adam: state size mismatch");
    ++state.step;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    const T b1 = static_cast<T>(cfg.beta1), b2 = static_cast<T>(cfg.beta2);
    const T step = static_cast<T>(lr / c1);
    const T inv_c2 = static_cast<T>(1.0 / c2);
    const T eps = static_cast<T>(cfg.eps);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const T g = grads[i];
        state.m[i] = b1 * state.m[i] + (T(1) - b1) * g;
        state.v[i] = b2 * state.v[i] + (T(1) - b2) * g * g;
        params[i] -= step * state.m[i] / (std::sqrt(state.v[i] * inv_c2) + eps);
    }
}

template void adam_step<float>(std::span<float>, std::span<const float>, AdamState<float>&, double,
                               const AdamConfig&);
template void adam_step<double>(std::span<double>, std::span<const double>, AdamState<double>&, double,
                                const AdamConfig&);

double cyclical_lr(std::int64_t step, std::int64_t total_steps, double lr_min, double lr_max, int cycles) {
    if (total_steps <= 0 || cycles <= 0) return lr_min;
    step = std::clamp<std::int64_t>(step, 0, total_steps - 1);
    const double period = static_cast<double>(total_steps) / cycles;
    const double pos = std::fmod(static_cast<double>(step), period) / period;  // [0, 1)
    const double tri = 1.0 - std::abs(2.0 * pos - 1.0);
    return lr_min + (lr_max - lr_min) * tri;
}

}  // namespace radarseg::nn
