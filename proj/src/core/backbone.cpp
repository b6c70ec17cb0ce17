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

#include "core/backbone.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include <cblas.h>

#include "core/error.hpp"

namespace deepssim {
namespace {

// Upper bound on the im2col scratch buffer, in floats. Output rows are
// processed in strips so large images do not need a full unfolded copy.
constexpr std::size_t kColumnBudget = std::size_t(1) << 22;

// Unfolds rows [y0, y1) of the padded input into a [in*9, (y1-y0)*W] matrix.
void Im2ColRows(const Tensor& in, int y0, int y1, std::vector<float>& col) {
  const int w = in.width;
  const std::size_t strip = std::size_t(y1 - y0) * w;
  col.resize(std::size_t(in.channels) * 9 * strip);
  float* dst = col.data();
  for (int c = 0; c < in.channels; ++c) {
    const float* src_plane = in.data.data() + c * in.plane();
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const int dx = kx - 1;
        for (int y = y0; y < y1; ++y) {
          const int sy = y + ky - 1;
          float* row = dst + std::size_t(y - y0) * w;
          if (sy < 0 || sy >= in.height) {
            std::fill(row, row + w, 0.0f);
            continue;
          }
          const float* src = src_plane + std::size_t(sy) * w;
          const int x_begin = std::max(0, -dx);
          const int x_end = std::min(w, w - dx);
          std::fill(row, row + x_begin, 0.0f);
          std::memcpy(row + x_begin, src + x_begin + dx, sizeof(float) * (x_end - x_begin));
          std::fill(row + x_end, row + w, 0.0f);
        }
        dst += strip;
      }
    }
  }
}

}  // namespace

Tensor Preprocess(const Image& image, const PreprocessSpec& spec) {
  spec.Validate();
  Tensor out(3, image.height, image.width);
  const float scale = spec.value_range == ValueRange::kByte ? 255.0f : 1.0f;
  for (int c = 0; c < 3; ++c) {
    const int src_c = spec.channel_order == ChannelOrder::kRgb ? c : 2 - c;
    const float mean = spec.channel_mean[c];
    const float inv_std = 1.0f / spec.channel_std[c];
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) {
        out.at(c, y, x) = (image.at(y, x, src_c) * scale - mean) * inv_std;
      }
    }
  }
  return out;
}

namespace ops {

Tensor Conv3x3(const Tensor& input, std::span<const float> kernel, std::span<const float> bias,
               int out_channels, bool relu) {
  const std::size_t k = std::size_t(input.channels) * 9;
  if (kernel.size() != std::size_t(out_channels) * k || bias.size() != std::size_t(out_channels)) {
    Fail(ErrorKind::kInvalidArgument, "conv3x3: kernel/bias size mismatch");
  }
  Tensor out(out_channels, input.height, input.width);
  const int w = input.width;
  const int rows_per_strip =
      int(std::clamp<std::size_t>(kColumnBudget / (k * std::size_t(w)), 1, std::size_t(input.height)));

  std::vector<float> col;
  for (int y0 = 0; y0 < input.height; y0 += rows_per_strip) {
    const int y1 = std::min(input.height, y0 + rows_per_strip);
    const int n = (y1 - y0) * w;
    Im2ColRows(input, y0, y1, col);
    float* dst = out.data.data() + std::size_t(y0) * w;
    cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, out_channels, n, int(k), 1.0f,
                kernel.data(), int(k), col.data(), n, 0.0f, dst, int(out.plane()));
    for (int oc = 0; oc < out_channels; ++oc) {
      float* p = dst + oc * out.plane();
      const float b = bias[oc];
      if (relu) {
        for (int i = 0; i < n; ++i) p[i] = std::max(p[i] + b, 0.0f);
      } else {
        for (int i = 0; i < n; ++i) p[i] += b;
      }
    }
  }
  return out;
}

Tensor MaxPool2x2(const Tensor& input) {
  Tensor out(input.channels, input.height / 2, input.width / 2);
  for (int c = 0; c < out.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      const float* r0 = input.data.data() + c * input.plane() + std::size_t(2 * y) * input.width;
      const float* r1 = r0 + input.width;
      float* dst = out.data.data() + c * out.plane() + std::size_t(y) * out.width;
      for (int x = 0; x < out.width; ++x) {
        dst[x] = std::max(std::max(r0[2 * x], r0[2 * x + 1]), std::max(r1[2 * x], r1[2 * x + 1]));
      }
    }
  }
  return out;
}

}  // namespace ops

FeatureTensor ExtractFeatures(const Image& image, const WeightContainer& weights,
                              const BackboneOptions& options) {
  ValidateImage(image, kMinImageSide);
  if (weights.layers.size() != kVggLayerNames.size()) {
    Fail(ErrorKind::kValidation, "weight container does not hold the 11 VGG16 layers");
  }
  Tensor x = Preprocess(image, weights.preprocess);
  for (std::size_t i = 0; i < weights.layers.size(); ++i) {
    const ConvLayer& layer = weights.layers[i];
    const bool last = i + 1 == weights.layers.size();
    x = ops::Conv3x3(x, layer.kernel, layer.bias, layer.out_channels, !last || options.relu_at_output);
    // Pools follow conv1_2, conv2_2, conv3_3 and conv4_3.
    if (i == 1 || i == 3 || i == 6 || i == 9) x = ops::MaxPool2x2(x);
  }
  return x;
}

double TestVectorMaxAbsDiff(const WeightContainer& weights) {
  if (!weights.test_vector) Fail(ErrorKind::kValidation, "weight container has no test vector");
  const Image image = DecodeImage(weights.test_vector->png);
  const FeatureTensor features = ExtractFeatures(image, weights);
  const auto& expected = weights.test_vector->expected;
  if (expected.size() != features.data.size()) {
    Fail(ErrorKind::kValidation, "test vector activation has " + std::to_string(expected.size()) +
                                     " values, expected " + std::to_string(features.data.size()));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    worst = std::max(worst, std::abs(double(features.data[i]) - double(expected[i])));
  }
  return worst;
}

}  // namespace deepssim
