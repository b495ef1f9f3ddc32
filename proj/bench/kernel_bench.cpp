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

// Times the optimized kernels against the serial reference set, then a full
// backbone forward/backward pass.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "CLI11.hpp"
#include "radarseg/nn/kernels.hpp"
#include "radarseg/nn/network.hpp"

using namespace radarseg::nn;
using Clock = std::chrono::steady_clock;

namespace {

Tensor<float> random_tensor(std::vector<int> shape, std::mt19937_64& rng) {
    Tensor<float> t(std::move(shape));
    std::normal_distribution<float> d(0.0f, 1.0f);
    for (auto& v : t.values()) v = d(rng);
    return t;
}

double time_ms(const std::function<void()>& fn, int repeats) {
    fn();  // warmup
    const auto t0 = Clock::now();
    for (int i = 0; i < repeats; ++i) fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count() / repeats;
}

void row(const char* name, double ref_ms, double opt_ms) {
    std::printf("%-28s %10.2f %10.2f %8.1fx\n", name, ref_ms, opt_ms, ref_ms / opt_ms);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radarseg kernel benchmark"};
    int size = 64;
    int cin = 32;
    int cout = 64;
    int repeats = 3;
    int grid = 128;
    int wide = 64;
    int narrow = 32;
    int threads = 0;
    app.add_option("--size", size, "spatial size of kernel inputs");
    app.add_option("--cin", cin);
    app.add_option("--cout", cout);
    app.add_option("--repeats", repeats);
    app.add_option("--grid", grid, "grid size for the backbone pass");
    app.add_option("--wide", wide);
    app.add_option("--narrow", narrow);
    app.add_option("--threads", threads, "OpenMP threads (0 = default)");
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    std::mt19937_64 rng(3);
    const auto x = random_tensor({1, size, size, cin}, rng);
    const auto w = random_tensor({3, 3, cin, cout}, rng);
    const auto b = random_tensor({cout}, rng);
    const auto gy = random_tensor({1, size, size, cout}, rng);
    const auto wd = random_tensor({2, 2, cin, cout}, rng);
    const auto gyd = random_tensor({1, 2 * size, 2 * size, cout}, rng);
    Tensor<float> y, gx, gw(w.shape()), gb(b.shape()), gwd(wd.shape());
    std::vector<std::int32_t> idx;

    std::printf("threads=%d  input 1x%dx%dx%d -> %d channels\n", omp_get_max_threads(), size, size, cin, cout);
    std::printf("%-28s %10s %10s %9s\n", "kernel", "ref [ms]", "opt [ms]", "speedup");
    row("conv3x3 forward", time_ms([&] { reference::conv2d_forward(x, w, b, y); }, repeats),
        time_ms([&] { kernels::conv2d_forward(x, w, b, y); }, repeats));
    row("conv3x3 backward", time_ms([&] { reference::conv2d_backward(x, w, gy, &gx, gw, gb); }, repeats),
        time_ms([&] { kernels::conv2d_backward(x, w, gy, &gx, gw, gb); }, repeats));
    row("deconv2 forward", time_ms([&] { reference::deconv2_forward(x, wd, b, y); }, repeats),
        time_ms([&] { kernels::deconv2_forward(x, wd, b, y); }, repeats));
    row("deconv2 backward", time_ms([&] { reference::deconv2_backward(x, wd, gyd, &gx, gwd, gb); }, repeats),
        time_ms([&] { kernels::deconv2_backward(x, wd, gyd, &gx, gwd, gb); }, repeats));
    row("maxpool2 forward", time_ms([&] { reference::maxpool2_forward(x, y, idx); }, repeats),
        time_ms([&] { kernels::maxpool2_forward(x, y, idx); }, repeats));

    BackboneConfig cfg;
    cfg.wide = wide;
    cfg.narrow = narrow;
    cfg.deconv_channels = narrow;
    Network<float> net(cfg, {{"out", 7}}, 0, 1);
    const auto in = random_tensor({1, grid, grid, 5}, rng);
    Activations<float> acts;
    std::vector<Tensor<float>> gl(1);
    const double fwd = time_ms([&] { net.forward(in, acts); }, repeats);
    gl[0] = random_tensor(acts.logits[0].shape(), rng);
    const double bwd = time_ms([&] { net.backward(acts, gl); }, repeats);
    std::printf("\nbackbone %dx%d wide=%d narrow=%d params=%zu: forward %.2f ms, backward %.2f ms\n", grid, grid,
                wide, narrow, net.parameter_count(), fwd, bwd);
    return 0;
}
