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

// Serial textbook kernels. Slow on purpose: every loop mirrors the definition.

#include "radarseg/nn/kernels.hpp"

namespace radarseg::nn {

std::string shape_string(const std::vector<int>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

void check_conv_shapes(const std::vector<int>& in, const std::vector<int>& weight,
                       const std::vector<int>& bias) {
    if (in.size() != 4) throw ShapeError("conv input must be NHWC, got " + shape_string(in));
    if (weight.size() != 4 || weight[0] != weight[1] || weight[0] % 2 == 0)
        throw ShapeError("conv kernel must be k x k x Cin x Cout with odd k, got " + shape_string(weight));
    if (weight[2] != in[3])
        throw ShapeError("conv channel mismatch: input " + shape_string(in) + ", kernel " + shape_string(weight));
    if (bias.size() != 1 || bias[0] != weight[3])
        throw ShapeError("conv bias must have Cout entries, got " + shape_string(bias));
}

void check_deconv_shapes(const std::vector<int>& in, const std::vector<int>& weight,
                         const std::vector<int>& bias) {
    if (in.size() != 4) throw ShapeError("deconv input must be NHWC, got " + shape_string(in));
    if (weight.size() != 4 || weight[0] != 2 || weight[1] != 2)
        throw ShapeError("deconv kernel must be 2 x 2 x Cin x Cout, got " + shape_string(weight));
    if (weight[2] != in[3])
        throw ShapeError("deconv channel mismatch: input " + shape_string(in) + ", kernel " +
                         shape_string(weight));
    if (bias.size() != 1 || bias[0] != weight[3])
        throw ShapeError("deconv bias must have Cout entries, got " + shape_string(bias));
}

namespace reference {

template <typename T>
void conv2d_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias, Tensor<T>& out) {
    check_conv_shapes(in.shape(), weight.shape(), bias.shape());
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), Ci = in.dim(3);
    const int K = weight.dim(0), Co = weight.dim(3), pad = K / 2;
    out.resize({N, H, W, Co});
    for (int n = 0; n < N; ++n)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                for (int co = 0; co < Co; ++co) {
                    T acc = bias[co];
                    for (int ky = 0; ky < K; ++ky)
                        for (int kx = 0; kx < K; ++kx) {
                            const int iy = y + ky - pad, ix = x + kx - pad;
                            if (iy < 0 || iy >= H || ix < 0 || ix >= W) continue;
                            for (int ci = 0; ci < Ci; ++ci)
                                acc += in.at(n, iy, ix, ci) * weight.at(ky, kx, ci, co);
                        }
                    out.at(n, y, x, co) = acc;
                }
}

template <typename T>
void conv2d_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out,
                     Tensor<T>* grad_in, Tensor<T>& grad_weight, Tensor<T>& grad_bias) {
    check_conv_shapes(in.shape(), weight.shape(), grad_bias.shape());
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), Ci = in.dim(3);
    const int K = weight.dim(0), Co = weight.dim(3), pad = K / 2;
    if (grad_out.shape() != std::vector<int>{N, H, W, Co}) throw ShapeError("conv grad_out shape mismatch");
    if (grad_in) {
        grad_in->resize(in.shape());
        grad_in->fill(T(0));
    }
    for (int n = 0; n < N; ++n)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                for (int co = 0; co < Co; ++co) {
                    const T g = grad_out.at(n, y, x, co);
                    grad_bias[co] += g;
                    for (int ky = 0; ky < K; ++ky)
                        for (int kx = 0; kx < K; ++kx) {
                            const int iy = y + ky - pad, ix = x + kx - pad;
                            if (iy < 0 || iy >= H || ix < 0 || ix >= W) continue;
                            for (int ci = 0; ci < Ci; ++ci) {
                                grad_weight.at(ky, kx, ci, co) += g * in.at(n, iy, ix, ci);
                                if (grad_in) grad_in->at(n, iy, ix, ci) += g * weight.at(ky, kx, ci, co);
                            }
                        }
                }
}

template <typename T>
void maxpool2_forward(const Tensor<T>& in, Tensor<T>& out, std::vector<std::int32_t>& argmax) {
    if (in.rank() != 4) throw ShapeError("maxpool input must be NHWC");
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), C = in.dim(3);
    if (H % 2 || W % 2) throw ShapeError("maxpool needs even spatial dims, got " + shape_string(in.shape()));
    out.resize({N, H / 2, W / 2, C});
    argmax.assign(out.size(), 0);
    std::size_t o = 0;
    for (int n = 0; n < N; ++n)
        for (int y = 0; y < H / 2; ++y)
            for (int x = 0; x < W / 2; ++x)
                for (int c = 0; c < C; ++c, ++o) {
                    // Row-major window scan; strict > keeps the first maximum.
                    std::int32_t best = -1;
                    T best_v{};
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            const auto idx = static_cast<std::int32_t>(
                                ((static_cast<std::size_t>(n) * H + 2 * y + dy) * W + 2 * x + dx) * C + c);
                            if (best < 0 || in[idx] > best_v) {
                                best = idx;
                                best_v = in[idx];
                            }
                        }
                    out[o] = best_v;
                    argmax[o] = best;
                }
}

template <typename T>
void maxpool2_backward(const Tensor<T>& grad_out, const std::vector<std::int32_t>& argmax, Tensor<T>& grad_in) {
    if (argmax.size() != grad_out.size()) throw ShapeError("maxpool argmax/grad size mismatch");
    grad_in.fill(T(0));
    for (std::size_t o = 0; o < grad_out.size(); ++o) grad_in[argmax[o]] += grad_out[o];
}

template <typename T>
void deconv2_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias, Tensor<T>& out) {
    check_deconv_shapes(in.shape(), weight.shape(), bias.shape());
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), Ci = in.dim(3), Co = weight.dim(3);
    out.resize({N, 2 * H, 2 * W, Co});
    for (int n = 0; n < N; ++n)
        for (int y = 0; y < 2 * H; ++y)
            for (int x = 0; x < 2 * W; ++x)
                for (int co = 0; co < Co; ++co) {
                    T acc = bias[co];
                    for (int ci = 0; ci < Ci; ++ci) acc += in.at(n, y / 2, x / 2, ci) * weight.at(y % 2, x % 2, ci, co);
                    out.at(n, y, x, co) = acc;
                }
}

template <typename T>
void deconv2_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out,
                      Tensor<T>* grad_in, Tensor<T>& grad_weight, Tensor<T>& grad_bias) {
    check_deconv_shapes(in.shape(), weight.shape(), grad_bias.shape());
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), Ci = in.dim(3), Co = weight.dim(3);
    if (grad_out.shape() != std::vector<int>{N, 2 * H, 2 * W, Co}) throw ShapeError("deconv grad_out shape mismatch");
    if (grad_in) {
        grad_in->resize(in.shape());
        grad_in->fill(T(0));
    }
    for (int n = 0; n < N; ++n)
        for (int y = 0; y < 2 * H; ++y)
            for (int x = 0; x < 2 * W; ++x)
                for (int co = 0; co < Co; ++co) {
                    const T g = grad_out.at(n, y, x, co);
                    grad_bias[co] += g;
                    for (int ci = 0; ci < Ci; ++ci) {
                        grad_weight.at(y % 2, x % 2, ci, co) += g * in.at(n, y / 2, x / 2, ci);
                        if (grad_in) grad_in->at(n, y / 2, x / 2, ci) += g * weight.at(y % 2, x % 2, ci, co);
                    }
                }
}

template <typename T>
void relu_forward(Tensor<T>& x) {
    for (auto& v : x.values()) v = v > T(0) ? v : T(0);
}

template <typename T>
void relu_backward(const Tensor<T>& activated, Tensor<T>& grad) {
    if (activated.size() != grad.size()) throw ShapeError("relu grad size mismatch");
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (!(activated[i] > T(0))) grad[i] = T(0);
}

template <typename T>
void concat_channels(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out) {
    if (a.rank() != 4 || b.rank() != 4 || a.dim(0) != b.dim(0) || a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2))
        throw ShapeError("concat needs equal N, H, W: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
    const int N = a.dim(0), H = a.dim(1), W = a.dim(2), Ca = a.dim(3), Cb = b.dim(3);
    out.resize({N, H, W, Ca + Cb});
    for (int n = 0; n < N; ++n)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                for (int c = 0; c < Ca; ++c) out.at(n, y, x, c) = a.at(n, y, x, c);
                for (int c = 0; c < Cb; ++c) out.at(n, y, x, Ca + c) = b.at(n, y, x, c);
            }
}

template <typename T>
void split_channels(const Tensor<T>& grad, int channels_a, Tensor<T>& grad_a, Tensor<T>& grad_b) {
    if (grad.rank() != 4 || channels_a < 0 || channels_a > grad.dim(3)) throw ShapeError("bad channel split");
    const int N = grad.dim(0), H = grad.dim(1), W = grad.dim(2), Cb = grad.dim(3) - channels_a;
    grad_a.resize({N, H, W, channels_a});
    grad_b.resize({N, H, W, Cb});
    for (int n = 0; n < N; ++n)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                for (int c = 0; c < channels_a; ++c) grad_a.at(n, y, x, c) = grad.at(n, y, x, c);
                for (int c = 0; c < Cb; ++c) grad_b.at(n, y, x, c) = grad.at(n, y, x, channels_a + c);
            }
}

#define RADARSEG_INSTANTIATE(T)                                                                          \
    template void conv2d_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Tensor<T>&);   \
    template void conv2d_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Tensor<T>*,    \
                                     Tensor<T>&, Tensor<T>&);                                            \
    template void maxpool2_forward<T>(const Tensor<T>&, Tensor<T>&, std::vector<std::int32_t>&);          \
    template void maxpool2_backward<T>(const Tensor<T>&, const std::vector<std::int32_t>&, Tensor<T>&);   \
    template void deconv2_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Tensor<T>&);  \
    template void deconv2_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Tensor<T>*,   \
                                      Tensor<T>&, Tensor<T>&);                                           \
    template void relu_forward<T>(Tensor<T>&);                                                           \
    template void relu_backward<T>(const Tensor<T>&, Tensor<T>&);                                        \
    template void concat_channels<T>(const Tensor<T>&, const Tensor<T>&, Tensor<T>&);                    \
    template void split_channels<T>(const Tensor<T>&, int, Tensor<T>&, Tensor<T>&);

RADARSEG_INSTANTIATE(float)
RADARSEG_INSTANTIATE(double)

}  // namespace reference
}  // namespace radarseg::nn
