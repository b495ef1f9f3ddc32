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

#ifndef RADARSEG_NN_NETWORK_HPP
#define RADARSEG_NN_NETWORK_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "radarseg/nn/tensor.hpp"

namespace radarseg::nn {

/// Shallow U-Net backbone geometry.
///
/// Encoder level l: conv(wide) -> conv(narrow) -> maxpool2, repeated `depth`
/// times; bottleneck: conv(wide) -> conv(narrow); decoder level l:
/// deconv2(deconv_channels) -> concat(skip l) -> conv(wide) -> conv(narrow).
/// ReLU follows every convolution and deconvolution. The output has `narrow`
/// channels at input resolution.
struct BackboneConfig {
    int in_channels = 5;
    int wide = 64;
    int narrow = 32;
    int deconv_channels = 32;
    int depth = 2;
    int kernel = 3;
    // Fixed per-channel input scaling (x, y, rcs, vx, vy). Scale only, so
    // empty cells stay exactly zero.
    std::vector<double> input_scale{1.0 / 50.0, 1.0 / 50.0, 1.0 / 20.0, 1.0 / 10.0, 1.0 / 10.0};

    void validate() const;
    bool operator==(const BackboneConfig&) const = default;
};

struct HeadSpec {
    std::string name;
    int classes = 0;
    bool operator==(const HeadSpec&) const = default;
};

template <typename T>
struct Param {
    std::string name;
    Tensor<T> value;
    Tensor<T> grad;
};

/// Intermediate tensors of one forward pass; consumed by backward.
template <typename T>
struct Activations {
    Tensor<T> input;  // scaled
    std::vector<Tensor<T>> enc_in, enc_a, enc_b, pooled;
    std::vector<std::vector<std::int32_t>> pool_idx;
    Tensor<T> mid_a, mid_b;
    std::vector<Tensor<T>> up, cat, dec_a, dec_b;  // indexed by level
    std::vector<std::vector<Tensor<T>>> branch;     // [head][layer]
    std::vector<Tensor<T>> logits;                  // per head, N x H x W x K
    const Tensor<T>& features() const { return dec_b.empty() ? mid_b : dec_b[0]; }
};

/// Backbone plus one or more 1x1 classification heads. Each head may be
/// preceded by `branch_convs` private 3x3 conv layers of `narrow` channels.
///
/// forward() is const and may run concurrently on distinct Activations;
/// backward() accumulates into the parameter gradients (single writer).
template <typename T>
class Network {
public:
    Network() = default;
    Network(const BackboneConfig& cfg, std::vector<HeadSpec> heads, int branch_convs, std::uint64_t seed);

    void forward(const Tensor<T>& input, Activations<T>& acts) const;
    /// `grad_logits[h]` is dL/dlogits for head h; an empty tensor skips that head.
    void backward(const Activations<T>& acts, const std::vector<Tensor<T>>& grad_logits);

    void zero_grad();
    std::size_t parameter_count() const;

    const BackboneConfig& config() const noexcept { return cfg_; }
    const std::vector<HeadSpec>& heads() const noexcept { return heads_; }
    int branch_convs() const noexcept { return branch_convs_; }
    std::vector<Param<T>>& params() noexcept { return params_; }
    const std::vector<Param<T>>& params() const noexcept { return params_; }

    template <typename U>
    Network<U> cast() const;

private:
    template <typename U>
    friend class Network;

    struct Layer {
        int weight = -1;
        int bias = -1;
    };

    Layer add_conv(const std::string& name, int k, int cin, int cout, std::mt19937_64& rng);
    Layer add_deconv(const std::string& name, int cin, int cout, std::mt19937_64& rng);

    void conv_relu(const Layer& l, const Tensor<T>& in, Tensor<T>& out) const;
    // Backprop through relu(conv(in)); `grad` holds dL/d(out) and is consumed.
    void conv_relu_backward(const Layer& l, const Tensor<T>& in, const Tensor<T>& out, Tensor<T>& grad,
                            Tensor<T>* grad_in);

    BackboneConfig cfg_;
    std::vector<HeadSpec> heads_;
    int branch_convs_ = 0;
    std::vector<Param<T>> params_;
    std::vector<Layer> enc_a_, enc_b_;
    Layer mid_a_, mid_b_;
    std::vector<Layer> up_, dec_a_, dec_b_;
    std::vector<std::vector<Layer>> branch_;
    std::vector<Layer> head_;
};

}  // namespace radarseg::nn

#endif  // RADARSEG_NN_NETWORK_HPP
