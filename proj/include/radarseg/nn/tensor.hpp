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

#ifndef RADARSEG_NN_TENSOR_HPP
#define RADARSEG_NN_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "radarseg/core.hpp"

namespace radarseg::nn {

/// Dense row-major tensor. Feature maps use NHWC.
template <typename T>
class Tensor {
public:
    using value_type = T;

    Tensor() = default;
    explicit Tensor(std::vector<int> shape, T fill = T(0)) : shape_(std::move(shape)) {
        for (int d : shape_) {
            if (d < 0) throw ShapeError("negative tensor dimension");
        }
        data_.assign(count(shape_), fill);
    }

    static std::size_t count(const std::vector<int>& shape) {
        return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                               [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
    }

    const std::vector<int>& shape() const noexcept { return shape_; }
    int rank() const noexcept { return static_cast<int>(shape_.size()); }
    int dim(int i) const { return shape_.at(static_cast<std::size_t>(i)); }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }
    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    /// NHWC element access.
    T& at(int n, int h, int w, int c) noexcept { return data_[offset(n, h, w, c)]; }
    const T& at(int n, int h, int w, int c) const noexcept { return data_[offset(n, h, w, c)]; }

    void fill(T v) noexcept { std::fill(data_.begin(), data_.end(), v); }

    /// Reallocates only when the element count changes.
    void resize(std::vector<int> shape) {
        shape_ = std::move(shape);
        data_.resize(count(shape_));
    }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
    }

    template <typename U>
    Tensor<U> cast() const {
        Tensor<U> out(shape_);
        std::transform(data_.begin(), data_.end(), out.data(), [](T v) { return static_cast<U>(v); });
        return out;
    }

private:
    std::size_t offset(int n, int h, int w, int c) const noexcept {
        return ((static_cast<std::size_t>(n) * shape_[1] + h) * shape_[2] + w) * shape_[3] + c;
    }

    std::vector<int> shape_;
    std::vector<T> data_;
};

std::string shape_string(const std::vector<int>& shape);

}  // namespace radarseg::nn

#endif  // RADARSEG_NN_TENSOR_HPP
