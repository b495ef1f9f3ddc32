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

#ifndef RADARSEG_NN_OPTIM_HPP
#define RADARSEG_NN_OPTIM_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace radarseg::nn {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Moment buffers for one parameter block.
template <typename T>
struct AdamState {
    std::vector<T> m;
    std::vector<T> v;
    std::int64_t step = 0;
};

/// One bias-corrected Adam update. Sizes the state on first use.
template <typename T>
void adam_step(std::span<T> params, std::span<const T> grads, AdamState<T>& state, double lr,
               const AdamConfig& cfg = {});

/// Triangular cyclical learning rate. The schedule is split into `cycles`
/// equal periods; each rises linearly from lr_min to lr_max at its midpoint
/// and falls back.
double cyclical_lr(std::int64_t step, std::int64_t total_steps, double lr_min, double lr_max, int cycles);

}  // namespace radarseg::nn

#endif  // RADARSEG_NN_OPTIM_HPP
