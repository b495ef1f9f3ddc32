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

#ifndef RADARSEG_NN_LOSS_HPP
#define RADARSEG_NN_LOSS_HPP

#include <span>

#include "radarseg/nn/tensor.hpp"

namespace radarseg::nn {

constexpr int kIgnoreTarget = -1;

/// Weighted multi-class focal loss on softmax probabilities,
///   L_i = -w[t_i] * (1 - p_t)^gamma * log(p_t),
/// averaged over samples whose target is not kIgnoreTarget. `logits` is any
/// tensor whose last dimension is the class count K; `grad` receives dL/dlogits
/// with the same shape. If every sample is ignored, loss and gradient are 0.
template <typename T>
T focal_loss(const Tensor<T>& logits, std::span<const int> targets, std::span<const double> weights, double gamma,
             Tensor<T>& grad);

}  // namespace radarseg::nn

#endif  // RADARSEG_NN_LOSS_HPP
