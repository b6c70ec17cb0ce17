// Copyright 2026 The DeepSSIM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEEPSSIM_CORE_BACKBONE_HPP_
#define DEEPSSIM_CORE_BACKBONE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "core/image.hpp"
#include "core/weights.hpp"

namespace deepssim {

// Four 2x pools must leave a non-empty conv5_1 grid.
inline constexpr int kMinImageSide = 32;

// Channel-first float block [channels, height, width].
struct Tensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  Tensor() = default;
  Tensor(int c, int h, int w) : channels(c), height(h), width(w), data(std::size_t(c) * h * w, 0.0f) {}

  std::size_t plane() const { return std::size_t(height) * width; }
  float& at(int c, int y, int x) { return data[c * plane() + std::size_t(y) * width + x]; }
  float at(int c, int y, int x) const { return data[c * plane() + std::size_t(y) * width + x]; }
};

// conv5_1 activation block: 512 x floor(H/16) x floor(W/16).
using FeatureTensor = Tensor;

// (value - mean) / std per channel, channel-first, in the order the spec names.
Tensor Preprocess(const Image& image, const PreprocessSpec& spec);

namespace ops {

// 3x3 convolution, zero padding 1, stride 1, plus bias; ReLU when `relu`.
// `kernel` is [out, in, 3, 3].
Tensor Conv3x3(const Tensor& input, std::span<const float> kernel, std::span<const float> bias,
               int out_channels, bool relu);

// 2x2 max pool, stride 2, floor mode: a trailing odd row/column is dropped.
Tensor MaxPool2x2(const Tensor& input);

}  // namespace ops

struct BackboneOptions {
  bool relu_at_output = true;  // false yields the pre-activation conv5_1 response
};

FeatureTensor ExtractFeatures(const Image& image, const WeightContainer& weights,
                              const BackboneOptions& options = {});

// Runs the embedded test image through ExtractFeatures and returns the largest
// absolute deviation from the embedded activation. Throws kValidation when the
// container has no test vector or the activation size does not fit the image.
double TestVectorMaxAbsDiff(const WeightContainer& weights);

}  // namespace deepssim

#endif  // DEEPSSIM_CORE_BACKBONE_HPP_
