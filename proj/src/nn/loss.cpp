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

#include "radarseg/nn/loss.hpp"

#include <vector>

namespace radarseg::nn {

template <typename T>
T focal_loss(const Tensor<T>& logits, std::span<const int> targets, std::span<const double> weights, double gamma,
             Tensor<T>& grad) {
    if (logits.rank() < 1) throw ShapeError("focal loss needs at least one dimension");
    const int K = logits.dim(logits.rank() - 1);
    if (K <= 0 || logits.size() % K != 0) throw ShapeError("focal loss: bad class dimension");
    const std::size_t M = logits.size() / K;
    if (targets.size() != M)
        throw ShapeError("focal loss: " + std::to_string(targets.size()) + " targets for " + std::to_string(M) +
                         " samples");
    if (weights.size() != static_cast<std::size_t>(K)) throw ShapeError("focal loss: one weight per class required");
    grad.resize(logits.shape());
    grad.fill(T(0));

    std::size_t counted = 0;
    for (int t : targets) {
        if (t == kIgnoreTarget) continue;
        if (t < 0 || t >= K) throw ShapeError("focal loss: target out of range");
        ++counted;
    }
    if (counted == 0) return T(0);

    const double inv = 1.0 / static_cast<double>(counted);
    double total = 0.0;
    std::vector<double> p(K);
    for (std::size_t i = 0; i < M; ++i) {
        const int t = targets[i];
        if (t == kIgnoreTarget) continue;
        const T* z = logits.data() + i * K;
        double zmax = z[0];
        for (int k = 1; k < K; ++k) zmax = std::max(zmax, static_cast<double>(z[k]));
        double sum = 0.0;
        for (int k = 0; k < K; ++k) {
            p[k] = std::exp(static_cast<double>(z[k]) - zmax);
            sum += p[k];
        }
        for (int k = 0; k < K; ++k) p[k] /= sum;
        const double log_pt = static_cast<double>(z[t]) - zmax - std::log(sum);
        const double pt = p[t];
        const double q = 1.0 - pt;
        const double w = weights[t];
        const double mod = gamma == 0.0 ? 1.0 : std::pow(q, gamma);
        total += -w * mod * log_pt;

        // dL/dz_j = c * (p_j - [j == t]) with
        // c = w * ((1-p)^g - g * p * (1-p)^(g-1) * log p).
        double dmod = 0.0;
        if (gamma != 0.0 && q > 0.0) dmod = gamma * std::pow(q, gamma - 1.0);
        const double c = w * (mod - dmod * pt * log_pt) * inv;
        T* g = grad.data() + i * K;
        for (int k = 0; k < K; ++k) g[k] = static_cast<T>(c * (p[k] - (k == t ? 1.0 : 0.0)));
    }
    return static_cast<T>(total * inv);
}

template float focal_loss<float>(const Tensor<float>&, std::span<const int>, std::span<const double>, double,
                                 Tensor<float>&);
template double focal_loss<double>(const Tensor<double>&, std::span<const int>, std::span<const double>, double,
                                   Tensor<double>&);

}  // namespace radarseg::nn
