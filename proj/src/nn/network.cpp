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

#include "radarseg/nn/network.hpp"

#include "radarseg/nn/kernels.hpp"

namespace radarseg::nn {

namespace k = kernels;

void BackboneConfig::validate() const {
    if (in_channels <= 0 || wide <= 0 || narrow <= 0 || deconv_channels <= 0)
        throw InputError("backbone channel counts must be positive");
    if (depth < 0 || depth > 6) throw InputError("backbone depth must be in 0..6");
    if (kernel <= 0 || kernel % 2 == 0) throw InputError("backbone kernel size must be odd");
    if (static_cast<int>(input_scale.size()) != in_channels)
        throw InputError("input_scale needs one entry per input channel");
}

template <typename T>
Network<T>::Network(const BackboneConfig& cfg, std::vector<HeadSpec> heads, int branch_convs, std::uint64_t seed)
    : cfg_(cfg), heads_(std::move(heads)), branch_convs_(branch_convs) {
    cfg_.validate();
    if (heads_.empty()) throw InputError("network needs at least one head");
    if (branch_convs_ < 0) throw InputError("branch_convs must be >= 0");
    std::mt19937_64 rng(seed);
    const int K = cfg_.kernel;
    int channels = cfg_.in_channels;
    for (int l = 0; l < cfg_.depth; ++l) {
        enc_a_.push_back(add_conv("enc" + std::to_string(l) + ".a", K, channels, cfg_.wide, rng));
        enc_b_.push_back(add_conv("enc" + std::to_string(l) + ".b", K, cfg_.wide, cfg_.narrow, rng));
        channels = cfg_.narrow;
    }
    mid_a_ = add_conv("mid.a", K, channels, cfg_.wide, rng);
    mid_b_ = add_conv("mid.b", K, cfg_.wide, cfg_.narrow, rng);
    up_.resize(cfg_.depth);
    dec_a_.resize(cfg_.depth);
    dec_b_.resize(cfg_.depth);
    for (int l = cfg_.depth - 1; l >= 0; --l) {
        const std::string p = "dec" + std::to_string(l);
        up_[l] = add_deconv(p + ".up", cfg_.narrow, cfg_.deconv_channels, rng);
        dec_a_[l] = add_conv(p + ".a", K, cfg_.deconv_channels + cfg_.narrow, cfg_.wide, rng);
        dec_b_[l] = add_conv(p + ".b", K, cfg_.wide, cfg_.narrow, rng);
    }
    branch_.resize(heads_.size());
    for (std::size_t h = 0; h < heads_.size(); ++h) {
        if (heads_[h].classes <= 0) throw InputError("head '" + heads_[h].name + "' needs classes > 0");
        for (int j = 0; j < branch_convs_; ++j)
            branch_[h].push_back(
                add_conv(heads_[h].name + ".branch" + std::to_string(j), K, cfg_.narrow, cfg_.narrow, rng));
        head_.push_back(add_conv(heads_[h].name + ".head", 1, cfg_.narrow, heads_[h].classes, rng));
    }
}

template <typename T>
typename Network<T>::Layer Network<T>::add_conv(const std::string& name, int kk, int cin, int cout,
                                                std::mt19937_64& rng) {
    Layer l;
    Param<T> w{name + ".weight", Tensor<T>({kk, kk, cin, cout}), Tensor<T>({kk, kk, cin, cout})};
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / (kk * kk * cin)));
    for (auto& v : w.value.values()) v = static_cast<T>(dist(rng));
    l.weight = static_cast<int>(params_.size());
    params_.push_back(std::move(w));
    l.bias = static_cast<int>(params_.size());
    params_.push_back({name + ".bias", Tensor<T>({cout}), Tensor<T>({cout})});
    return l;
}

template <typename T>
typename Network<T>::Layer Network<T>::add_deconv(const std::string& name, int cin, int cout, std::mt19937_64& rng) {
    Layer l;
    Param<T> w{name + ".weight", Tensor<T>({2, 2, cin, cout}), Tensor<T>({2, 2, cin, cout})};
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / cin));
    for (auto& v : w.value.values()) v = static_cast<T>(dist(rng));
    l.weight = static_cast<int>(params_.size());
    params_.push_back(std::move(w));
    l.bias = static_cast<int>(params_.size());
    params_.push_back({name + ".bias", Tensor<T>({cout}), Tensor<T>({cout})});
    return l;
}

template <typename T>
void Network<T>::conv_relu(const Layer& l, const Tensor<T>& in, Tensor<T>& out) const {
    k::conv2d_forward(in, params_[l.weight].value, params_[l.bias].value, out);
    k::relu_forward(out);
}

template <typename T>
void Network<T>::conv_relu_backward(const Layer& l, const Tensor<T>& in, const Tensor<T>& out, Tensor<T>& grad,
                                    Tensor<T>* grad_in) {
    k::relu_backward(out, grad);
    k::conv2d_backward(in, params_[l.weight].value, grad, grad_in, params_[l.weight].grad, params_[l.bias].grad);
}

template <typename T>
void Network<T>::forward(const Tensor<T>& input, Activations<T>& a) const {
    if (input.rank() != 4 || input.dim(3) != cfg_.in_channels)
        throw ShapeError("network input must be N x H x W x " + std::to_string(cfg_.in_channels) + ", got " +
                         shape_string(input.shape()));
    const int div = 1 << cfg_.depth;
    if (input.dim(1) % div || input.dim(2) % div)
        throw ShapeError("spatial dims " + shape_string(input.shape()) + " not divisible by " + std::to_string(div));

    a.input.resize(input.shape());
    const int C = cfg_.in_channels;
    for (std::size_t i = 0; i < input.size(); ++i) a.input[i] = input[i] * static_cast<T>(cfg_.input_scale[i % C]);

    const int D = cfg_.depth;
    a.enc_in.resize(D);
    a.enc_a.resize(D);
    a.enc_b.resize(D);
    a.pooled.resize(D);
    a.pool_idx.resize(D);
    for (int l = 0; l < D; ++l) {
        a.enc_in[l] = l == 0 ? a.input : a.pooled[l - 1];
        conv_relu(enc_a_[l], a.enc_in[l], a.enc_a[l]);
        conv_relu(enc_b_[l], a.enc_a[l], a.enc_b[l]);
        k::maxpool2_forward(a.enc_b[l], a.pooled[l], a.pool_idx[l]);
    }
    conv_relu(mid_a_, D > 0 ? a.pooled[D - 1] : a.input, a.mid_a);
    conv_relu(mid_b_, a.mid_a, a.mid_b);

    a.up.resize(D);
    a.cat.resize(D);
    a.dec_a.resize(D);
    a.dec_b.resize(D);
    for (int l = D - 1; l >= 0; --l) {
        const Tensor<T>& prev = l == D - 1 ? a.mid_b : a.dec_b[l + 1];
        k::deconv2_forward(prev, params_[up_[l].weight].value, params_[up_[l].bias].value, a.up[l]);
        k::relu_forward(a.up[l]);
        k::concat_channels(a.up[l], a.enc_b[l], a.cat[l]);
        conv_relu(dec_a_[l], a.cat[l], a.dec_a[l]);
        conv_relu(dec_b_[l], a.dec_a[l], a.dec_b[l]);
    }

    const Tensor<T>& feat = a.features();
    a.branch.resize(heads_.size());
    a.logits.resize(heads_.size());
    for (std::size_t h = 0; h < heads_.size(); ++h) {
        a.branch[h].resize(branch_[h].size());
        const Tensor<T>* x = &feat;
        for (std::size_t j = 0; j < branch_[h].size(); ++j) {
            conv_relu(branch_[h][j], *x, a.branch[h][j]);
            x = &a.branch[h][j];
        }
        k::conv2d_forward(*x, params_[head_[h].weight].value, params_[head_[h].bias].value, a.logits[h]);
    }
}

template <typename T>
void Network<T>::backward(const Activations<T>& a, const std::vector<Tensor<T>>& grad_logits) {
    if (grad_logits.size() != heads_.size()) throw ShapeError("one logits gradient per head required");
    const Tensor<T>& feat = a.features();
    Tensor<T> dfeat(feat.shape());
    Tensor<T> g, gin;
    for (std::size_t h = 0; h < heads_.size(); ++h) {
        if (grad_logits[h].empty()) continue;
        if (grad_logits[h].shape() != a.logits[h].shape()) throw ShapeError("logits gradient shape mismatch");
        const std::size_t nb = branch_[h].size();
        const Tensor<T>& head_in = nb ? a.branch[h][nb - 1] : feat;
        k::conv2d_backward(head_in, params_[head_[h].weight].value, grad_logits[h], &g, params_[head_[h].weight].grad,
                           params_[head_[h].bias].grad);
        for (std::size_t j = nb; j-- > 0;) {
            const Tensor<T>& in = j ? a.branch[h][j - 1] : feat;
            conv_relu_backward(branch_[h][j], in, a.branch[h][j], g, &gin);
            std::swap(g, gin);
        }
        for (std::size_t i = 0; i < dfeat.size(); ++i) dfeat[i] += g[i];
    }

    const int D = cfg_.depth;
    std::vector<Tensor<T>> g_skip(D);
    Tensor<T> g_prev = std::move(dfeat);
    Tensor<T> g_up;
    for (int l = 0; l < D; ++l) {
        conv_relu_backward(dec_b_[l], a.dec_a[l], a.dec_b[l], g_prev, &gin);
        conv_relu_backward(dec_a_[l], a.cat[l], a.dec_a[l], gin, &g);
        k::split_channels(g, cfg_.deconv_channels, g_up, g_skip[l]);
        k::relu_backward(a.up[l], g_up);
        const Tensor<T>& prev = l == D - 1 ? a.mid_b : a.dec_b[l + 1];
        k::deconv2_backward(prev, params_[up_[l].weight].value, g_up, &g_prev, params_[up_[l].weight].grad,
                            params_[up_[l].bias].grad);
    }

    const Tensor<T>& mid_in = D > 0 ? a.pooled[D - 1] : a.input;
    conv_relu_backward(mid_b_, a.mid_a, a.mid_b, g_prev, &gin);
    conv_relu_backward(mid_a_, mid_in, a.mid_a, gin, D > 0 ? &g_prev : nullptr);

    for (int l = D - 1; l >= 0; --l) {
        Tensor<T> g_b(a.enc_b[l].shape());
        k::maxpool2_backward(g_prev, a.pool_idx[l], g_b);
        for (std::size_t i = 0; i < g_b.size(); ++i) g_b[i] += g_skip[l][i];
        conv_relu_backward(enc_b_[l], a.enc_a[l], a.enc_b[l], g_b, &gin);
        conv_relu_backward(enc_a_[l], a.enc_in[l], a.enc_a[l], gin, l > 0 ? &g_prev : nullptr);
    }
}

template <typename T>
void Network<T>::zero_grad() {
    for (auto& p : params_) p.grad.fill(T(0));
}

template <typename T>
std::size_t Network<T>::parameter_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.value.size();
    return n;
}

template <typename T>
template <typename U>
Network<U> Network<T>::cast() const {
    Network<U> out;
    out.cfg_ = cfg_;
    out.heads_ = heads_;
    out.branch_convs_ = branch_convs_;
    for (const auto& p : params_) out.params_.push_back({p.name, p.value.template cast<U>(), p.grad.template cast<U>()});
    auto conv = [](const Layer& l) { return typename Network<U>::Layer{l.weight, l.bias}; };
    auto conv_all = [&](const std::vector<Layer>& ls) {
        std::vector<typename Network<U>::Layer> r;
        for (const auto& l : ls) r.push_back(conv(l));
        return r;
    };
    out.enc_a_ = conv_all(enc_a_);
    out.enc_b_ = conv_all(enc_b_);
    out.mid_a_ = conv(mid_a_);
    out.mid_b_ = conv(mid_b_);
    out.up_ = conv_all(up_);
    out.dec_a_ = conv_all(dec_a_);
    out.dec_b_ = conv_all(dec_b_);
    for (const auto& b : branch_) out.branch_.push_back(conv_all(b));
    out.head_ = conv_all(head_);
    return out;
}

template class Network<float>;
template class Network<double>;
template Network<double> Network<float>::cast<double>() const;
template Network<float> Network<double>::cast<float>() const;
template Network<float> Network<float>::cast<float>() const;

}  // namespace radarseg::nn
