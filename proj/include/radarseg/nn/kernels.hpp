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

#ifndef RADARSEG_NN_KERNELS_HPP
#define RADARSEG_NN_KERNELS_HPP

#include <cstdint>
#include <vector>

#include "radarseg/nn/tensor.hpp"

// Layer kernels in two flavours with identical signatures:
//   radarseg::nn::kernels    im2col + GEMM, OpenMP across pixel chunks
//   radarseg::nn::reference  direct loops, single-threaded
// The reference set is the oracle for the optimized one.
//
// Conventions: activations are NHWC, conv weights are k x k x Cin x Cout,
// deconv weights are 2 x 2 x Cin x Cout. Backward passes *accumulate* into
// weight and bias gradients and *overwrite* the input gradient; a null input
// gradient pointer skips that computation.

namespace radarseg::nn {

/// Shape validation shared by both kernel sets.
void check_conv_shapes(const std::vector<int>& in, const std::vector<int>& weight,
                       const std::vector<int>& bias);
void check_deconv_shapes(const std::vector<int>& in, const std::vector<int>& weight,
                         const std::vector<int>& bias);

#define RADARSEG_DECLARE_KERNELS                                                                  \
    template <typename T>                                                                         \
    void conv2d_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias,      \
                        Tensor<T>& out);                                                          \
    template <typename T>                                                                         \
    void conv2d_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out,  \
                         Tensor<T>* grad_in, Tensor<T>& grad_weight, Tensor<T>& grad_bias);       \
    template <typename T>                                                                         \
    void maxpool2_forward(const Tensor<T>& in, Tensor<T>& out, std::vector<std::int32_t>& argmax); \
    template <typename T>                                                                         \
    void maxpool2_backward(const Tensor<T>& grad_out, const std::vector<std::int32_t>& argmax,     \
                           Tensor<T>& grad_in);                                                   \
    template <typename T>                                                                         \
    void deconv2_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias,     \
                         Tensor<T>& out);                                                         \
    template <typename T>                                                                         \
    void deconv2_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out, \
                          Tensor<T>* grad_in, Tensor<T>& grad_weight, Tensor<T>& grad_bias);      \
    template <typename T>                                                                         \
    void relu_forward(Tensor<T>& x);                                                              \
    template <typename T>                                                                         \
    void relu_backward(const Tensor<T>& activated, Tensor<T>& grad);                              \
    template <typename T>                                                                         \
    void concat_channels(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out);                 \
    template <typename T>                                                                         \
    void split_channels(const Tensor<T>& grad, int channels_a, Tensor<T>& grad_a, Tensor<T>& grad_b);

namespace kernels {
RADARSEG_DECLARE_KERNELS
}  // namespace kernels

namespace reference {
RADARSEG_DECLARE_KERNELS
}  // namespace reference

#undef RADARSEG_DECLARE_KERNELS

}  // namespace radarseg::nn

#endif  // RADARSEG_NN_KERNELS_HPP
