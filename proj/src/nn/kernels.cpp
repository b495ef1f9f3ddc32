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

#include <Eigen/Core>
#include <cstring>

#include "radarseg/nn/kernels.hpp"

namespace radarseg::nn::kernels {

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMapMat = Eigen::Map<const RowMat<T>>;
template <typename T>
using ConstMapRow = Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>;

// Pixels per im2col chunk. Fixed so results do not depend on thread count.
constexpr std::int64_t kChunk = 512;

// Gathers k x k patches of rows [p0, p0 + rows) of the flattened N*H*W pixel
// range into col (rows x k*k*C), zero-padded at the borders.
template <typename T>
void im2col(const T* in, int H, int W, int C, int K, std::int64_t p0, std::int64_t rows, T* col) {
    const int pad = K / 2;
    const std::int64_t hw = static_cast<std::int64_t>(H) * W;
    const std::int64_t row_len = static_cast<std::int64_t>(K) * K * C;
    for (std::int64_t r = 0; r < rows; ++r) {
        const std::int64_t p = p0 + r;
        const std::int64_t n = p / hw;
        const int y = static_cast<int>((p % hw) / W);
        const int x = static_cast<int>(p % W);
        T* dst = col + r * row_len;
        for (int ky = 0; ky < K; ++ky) {
            const int iy = y + ky - pad;
            for (int kx = 0; kx < K; ++kx, dst += C) {
                const int ix = x + kx - pad;
                if (iy < 0 || iy >= H || ix < 0 || ix >= W) {
                    std::memset(dst, 0, sizeof(T) * C);
                } else {
                    std::memcpy(dst, in + ((n * H + iy) * W + ix) * C, sizeof(T) * C);
                }
            }
        }
    }
}

// Runs body(chunk_begin, chunk_rows, thread_id) over [0, P) in fixed chunks.
template <typename F>
void for_chunks(std::int64_t P, F&& body) {
    const std::int64_t n_chunks = (P + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        const std::int64_t p0 = c * kChunk;
        body(p0, std::min(kChunk, P - p0), omp_get_thread_num());
    }
}

// Same-padded convolution as one GEMM per chunk.
template <typename T>
void conv_gemm(const T* in, int N, int H, int W, int Ci, const RowMat<T>& wmat, const T* bias, int K, int Co,
               T* out) {
    const std::int64_t P = static_cast<std::int64_t>(N) * H * W;
    const std::int64_t row_len = static_cast<std::int64_t>(K) * K * Ci;
    if (K == 1) {
        ConstMapMat<T> x(in, P, Ci);
        MapMat<T> y(out, P, Co);
        for_chunks(P, [&](std::int64_t p0, std::int64_t rows, int) {
            y.middleRows(p0, rows).noalias() = x.middleRows(p0, rows) * wmat;
            if (bias) y.middleRows(p0, rows).rowwise() += ConstMapRow<T>(bias, Co);
        });
        return;
    }
    const int threads = omp_get_max_threads();
    std::vector<std::vector<T>> cols(threads);
    MapMat<T> y(out, P, Co);
    for_chunks(P, [&](std::int64_t p0, std::int64_t rows, int tid) {
        auto& col = cols[tid];
        col.resize(static_cast<std::size_t>(kChunk * row_len));
        im2col(in, H, W, Ci, K, p0, rows, col.data());
        ConstMapMat<T> cm(col.data(), rows, row_len);
        y.middleRows(p0, rows).noalias() = cm * wmat;
        if (bias) y.middleRows(p0, rows).rowwise() += ConstMapRow<T>(bias, Co);
    });
}

}  // namespace

template <typename T>
void conv2d_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias, Tensor<T>& out) {
    check_conv_shapes(in.shape(), weight.shape(), bias.shape());
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), Ci = in.dim(3);
    const int K = weight.dim(0), Co = weight.dim(3);
    out.resize({N, H, W, Co});
    const RowMat<T> wmat = ConstMapMat<T>(weight.data(), static_cast<std::int64_t>(K) * K * Ci, Co);
    conv_gemm(in.data(), N, H, W, Ci, wmat, bias.data(), K, Co, out.data());
}

template <typename T>
void conv2d_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out,
                     Tensor<T>* grad_in, Tensor<T>& grad_weight, Tensor<T>& grad_bias) {
    check_conv_shapes(in.shape(), weight.shape(), grad_bias.shape());
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), Ci = in.dim(3);
    const int K = weight.dim(0), Co = weight.dim(3);
    if (grad_out.shape() != std::vector<int>{N, H, W, Co}) throw ShapeError("conv grad_out shape mismatch");
    if (grad_weight.shape() != weight.shape()) throw ShapeError("conv grad_weight shape mismatch");
    const std::int64_t P = static_cast<std::int64_t>(N) * H * W;
    const std::int64_t row_len = static_cast<std::int64_t>(K) * K * Ci;
    ConstMapMat<T> dy(grad_out.data(), P, Co);

    // Weight and bias gradients: per-thread partial sums, reduced in thread order.
    const int threads = omp_get_max_threads();
    std::vector<RowMat<T>> dw_part(threads, RowMat<T>::Zero(row_len, Co));
    std::vector<Eigen::Matrix<T, 1, Eigen::Dynamic>> db_part(threads,
                                                             Eigen::Matrix<T, 1, Eigen::Dynamic>::Zero(Co));
    if (K == 1) {
        ConstMapMat<T> x(in.data(), P, Ci);
        for_chunks(P, [&](std::int64_t p0, std::int64_t rows, int tid) {
            dw_part[tid].noalias() += x.middleRows(p0, rows).transpose() * dy.middleRows(p0, rows);
            db_part[tid] += dy.middleRows(p0, rows).colwise().sum();
        });
    } else {
        std::vector<std::vector<T>> cols(threads);
        for_chunks(P, [&](std::int64_t p0, std::int64_t rows, int tid) {
            auto& col = cols[tid];
            col.resize(static_cast<std::size_t>(kChunk * row_len));
            im2col(in.data(), H, W, Ci, K, p0, rows, col.data());
            ConstMapMat<T> cm(col.data(), rows, row_len);
            dw_part[tid].noalias() += cm.transpose() * dy.middleRows(p0, rows);
            db_part[tid] += dy.middleRows(p0, rows).colwise().sum();
        });
    }
    MapMat<T> dw(grad_weight.data(), row_len, Co);
    for (int t = 0; t < threads; ++t) {
        dw += dw_part[t];
        for (int c = 0; c < Co; ++c) grad_bias[c] += db_part[t](c);
    }

    if (!grad_in) return;
    // Input gradient = same-padded convolution of grad_out with the spatially
    // flipped, channel-transposed kernel.
    grad_in->resize(in.shape());
    RowMat<T> wflip(static_cast<std::int64_t>(K) * K * Co, Ci);
    for (int ky = 0; ky < K; ++ky)
        for (int kx = 0; kx < K; ++kx)
            for (int ci = 0; ci < Ci; ++ci)
                for (int co = 0; co < Co; ++co)
                    wflip((static_cast<std::int64_t>(K - 1 - ky) * K + (K - 1 - kx)) * Co + co, ci) =
                        weight.at(ky, kx, ci, co);
    conv_gemm<T>(grad_out.data(), N, H, W, Co, wflip, nullptr, K, Ci, grad_in->data());
}

template <typename T>
void maxpool2_forward(const Tensor<T>& in, Tensor<T>& out, std::vector<std::int32_t>& argmax) {
    if (in.rank() != 4) throw ShapeError("maxpool input must be NHWC");
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), C = in.dim(3);
    if (H % 2 || W % 2) throw ShapeError("maxpool needs even spatial dims, got " + shape_string(in.shape()));
    const int Ho = H / 2, Wo = W / 2;
    out.resize({N, Ho, Wo, C});
    argmax.resize(out.size());
    const T* src = in.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t row = 0; row < static_cast<std::int64_t>(N) * Ho; ++row) {
        const std::int64_t n = row / Ho;
        const int y = static_cast<int>(row % Ho);
        for (int x = 0; x < Wo; ++x) {
            const std::int64_t base = ((n * H + 2 * y) * W + 2 * x) * C;
            const std::int64_t cand[4] = {base, base + C, base + static_cast<std::int64_t>(W) * C,
                                          base + static_cast<std::int64_t>(W) * C + C};
            const std::int64_t o = ((n * Ho + y) * Wo + x) * C;
            for (int c = 0; c < C; ++c) {
                std::int64_t best = cand[0] + c;
                T best_v = src[best];
                for (int k = 1; k < 4; ++k) {
                    const T v = src[cand[k] + c];
                    if (v > best_v) {
                        best_v = v;
                        best = cand[k] + c;
                    }
                }
                out[o + c] = best_v;
                argmax[o + c] = static_cast<std::int32_t>(best);
            }
        }
    }
}

template <typename T>
void maxpool2_backward(const Tensor<T>& grad_out, const std::vector<std::int32_t>& argmax, Tensor<T>& grad_in) {
    if (argmax.size() != grad_out.size()) throw ShapeError("maxpool argmax/grad size mismatch");
    grad_in.fill(T(0));
    // Windows are disjoint, so every input cell receives at most one write.
    const auto n = static_cast<std::int64_t>(grad_out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t o = 0; o < n; ++o) grad_in[argmax[o]] = grad_out[o];
}

template <typename T>
void deconv2_forward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& bias, Tensor<T>& out) {
    check_deconv_shapes(in.shape(), weight.shape(), bias.shape());
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), Ci = in.dim(3), Co = weight.dim(3);
    out.resize({N, 2 * H, 2 * W, Co});
    const std::int64_t P = static_cast<std::int64_t>(N) * H * W;
    // Tap-major weight view: column block t = 2*dy + dx holds Ci x Co.
    RowMat<T> wcat(Ci, 4 * Co);
    for (int t = 0; t < 4; ++t)
        wcat.middleCols(t * Co, Co) = ConstMapMat<T>(weight.data() + static_cast<std::size_t>(t) * Ci * Co, Ci, Co);
    ConstMapMat<T> x(in.data(), P, Ci);
    ConstMapRow<T> b(bias.data(), Co);
    const int threads = omp_get_max_threads();
    std::vector<RowMat<T>> ys(threads);
    for_chunks(P, [&](std::int64_t p0, std::int64_t rows, int tid) {
        RowMat<T>& y = ys[tid];
        y.noalias() = x.middleRows(p0, rows) * wcat;
        for (std::int64_t r = 0; r < rows; ++r) {
            const std::int64_t p = p0 + r;
            const std::int64_t n = p / (static_cast<std::int64_t>(H) * W);
            const int iy = static_cast<int>((p / W) % H);
            const int ix = static_cast<int>(p % W);
            for (int t = 0; t < 4; ++t) {
                T* dst = &out.at(static_cast<int>(n), 2 * iy + t / 2, 2 * ix + t % 2, 0);
                Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>>(dst, Co) = y.row(r).segment(t * Co, Co) + b;
            }
        }
    });
}

template <typename T>
void deconv2_backward(const Tensor<T>& in, const Tensor<T>& weight, const Tensor<T>& grad_out,
                      Tensor<T>* grad_in, Tensor<T>& grad_weight, Tensor<T>& grad_bias) {
    check_deconv_shapes(in.shape(), weight.shape(), grad_bias.shape());
    const int N = in.dim(0), H = in.dim(1), W = in.dim(2), Ci = in.dim(3), Co = weight.dim(3);
    if (grad_out.shape() != std::vector<int>{N, 2 * H, 2 * W, Co}) throw ShapeError("deconv grad_out shape mismatch");
    if (grad_weight.shape() != weight.shape()) throw ShapeError("deconv grad_weight shape mismatch");
    const std::int64_t P = static_cast<std::int64_t>(N) * H * W;
    RowMat<T> wcat(Ci, 4 * Co);
    for (int t = 0; t < 4; ++t)
        wcat.middleCols(t * Co, Co) = ConstMapMat<T>(weight.data() + static_cast<std::size_t>(t) * Ci * Co, Ci, Co);
    ConstMapMat<T> x(in.data(), P, Ci);
    if (grad_in) grad_in->resize(in.shape());

    const int threads = omp_get_max_threads();
    std::vector<RowMat<T>> dw_part(threads, RowMat<T>::Zero(Ci, 4 * Co));
    std::vector<RowMat<T>> dys(threads);
    for_chunks(P, [&](std::int64_t p0, std::int64_t rows, int tid) {
        RowMat<T>& dy = dys[tid];
        dy.resize(rows, 4 * Co);
        for (std::int64_t r = 0; r < rows; ++r) {
            const std::int64_t p = p0 + r;
            const std::int64_t n = p / (static_cast<std::int64_t>(H) * W);
            const int iy = static_cast<int>((p / W) % H);
            const int ix = static_cast<int>(p % W);
            for (int t = 0; t < 4; ++t) {
                const T* src = &grad_out.at(static_cast<int>(n), 2 * iy + t / 2, 2 * ix + t % 2, 0);
                dy.row(r).segment(t * Co, Co) = ConstMapRow<T>(src, Co);
            }
        }
        dw_part[tid].noalias() += x.middleRows(p0, rows).transpose() * dy;
        if (grad_in) {
            MapMat<T> dx(grad_in->data(), P, Ci);
            dx.middleRows(p0, rows).noalias() = dy * wcat.transpose();
        }
    });
    RowMat<T> dw = RowMat<T>::Zero(Ci, 4 * Co);
    for (int t = 0; t < threads; ++t) dw += dw_part[t];
    for (int t = 0; t < 4; ++t)
        MapMat<T>(grad_weight.data() + static_cast<std::size_t>(t) * Ci * Co, Ci, Co) += dw.middleCols(t * Co, Co);
    ConstMapMat<T> go(grad_out.data(), static_cast<std::int64_t>(grad_out.size()) / Co, Co);
    const Eigen::Matrix<T, 1, Eigen::Dynamic> db = go.colwise().sum();
    for (int c = 0; c < Co; ++c) grad_bias[c] += db(c);
}

template <typename T>
void relu_forward(Tensor<T>& x) {
    T* d = x.data();
    const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for simd schedule(static)
    for (std::int64_t i = 0; i < n; ++i) d[i] = d[i] > T(0) ? d[i] : T(0);
}

template <typename T>
void relu_backward(const Tensor<T>& activated, Tensor<T>& grad) {
    if (activated.size() != grad.size()) throw ShapeError("relu grad size mismatch");
    const T* a = activated.data();
    T* g = grad.data();
    const auto n = static_cast<std::int64_t>(grad.size());
#pragma omp parallel for simd schedule(static)
    for (std::int64_t i = 0; i < n; ++i) g[i] = a[i] > T(0) ? g[i] : T(0);
}

template <typename T>
void concat_channels(const Tensor<T>& a, const Tensor<T>& b, Tensor<T>& out) {
    if (a.rank() != 4 || b.rank() != 4 || a.dim(0) != b.dim(0) || a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2))
        throw ShapeError("concat needs equal N, H, W: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
    const int Ca = a.dim(3), Cb = b.dim(3);
    out.resize({a.dim(0), a.dim(1), a.dim(2), Ca + Cb});
    const auto P = static_cast<std::int64_t>(a.dim(0)) * a.dim(1) * a.dim(2);
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < P; ++p) {
        std::memcpy(out.data() + p * (Ca + Cb), a.data() + p * Ca, sizeof(T) * Ca);
        std::memcpy(out.data() + p * (Ca + Cb) + Ca, b.data() + p * Cb, sizeof(T) * Cb);
    }
}

template <typename T>
void split_channels(const Tensor<T>& grad, int channels_a, Tensor<T>& grad_a, Tensor<T>& grad_b) {
    if (grad.rank() != 4 || channels_a < 0 || channels_a > grad.dim(3)) throw ShapeError("bad channel split");
    const int C = grad.dim(3), Cb = C - channels_a;
    grad_a.resize({grad.dim(0), grad.dim(1), grad.dim(2), channels_a});
    grad_b.resize({grad.dim(0), grad.dim(1), grad.dim(2), Cb});
    const auto P = static_cast<std::int64_t>(grad.dim(0)) * grad.dim(1) * grad.dim(2);
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < P; ++p) {
        std::memcpy(grad_a.data() + p * channels_a, grad.data() + p * C, sizeof(T) * channels_a);
        std::memcpy(grad_b.data() + p * Cb, grad.data() + p * C + channels_a, sizeof(T) * Cb);
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

}  // namespace radarseg::nn::kernels
