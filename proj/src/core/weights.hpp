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

#ifndef DEEPSSIM_CORE_WEIGHTS_HPP_
#define DEEPSSIM_CORE_WEIGHTS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deepssim {

enum class ChannelOrder { kRgb, kBgr };
enum class ValueRange { kUnit, kByte };  // kByte scales [0,1] input by 255 first

struct PreprocessSpec {
  std::array<float, 3> channel_mean{0.485f, 0.456f, 0.406f};
  std::array<float, 3> channel_std{0.229f, 0.224f, 0.225f};
  ChannelOrder channel_order = ChannelOrder::kRgb;
  ValueRange value_range = ValueRange::kUnit;

  void Validate() const;
};

struct ConvLayer {
  std::string name;
  int out_channels = 0;
  int in_channels = 0;
  int kernel_h = 0;
  int kernel_w = 0;
  std::vector<float> kernel;  // [out, in, kh, kw]
  std::vector<float> bias;    // [out]
};

// Reference input and its conv5_1 activation, written by the exporter so the
// C++ forward pass can be checked against the framework that produced the
// weights.
struct TestVector {
  std::vector<std::uint8_t> png;
  std::vector<float> expected;  // [512, h/16, w/16] of the decoded png
};

struct WeightContainer {
  int format_version = 1;
  std::string source;
  PreprocessSpec preprocess;
  std::vector<ConvLayer> layers;
  std::optional<TestVector> test_vector;
};

inline constexpr std::string_view kContainerMagic = "DSIMW001";
inline constexpr std::size_t kPayloadAlignment = 64;

inline constexpr std::array<std::string_view, 11> kVggLayerNames = {
    "conv1_1", "conv1_2", "conv2_1", "conv2_2", "conv3_1", "conv3_2",
    "conv3_3", "conv4_1", "conv4_2", "conv4_3", "conv5_1"};
inline constexpr std::array<int, 12> kVggChannelChain = {3,   64,  64,  128, 128, 256,
                                                         256, 256, 512, 512, 512, 512};

// Enforces layer names and order, the 3->...->512 channel chain, 3x3
// kernels, buffer sizes and finiteness. Errors name the offending layer.
void ValidateWeights(const WeightContainer& weights);

WeightContainer LoadWeights(const std::filesystem::path& path);
WeightContainer ParseWeights(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> SerializeWeights(const WeightContainer& weights);
void SaveWeights(const WeightContainer& weights, const std::filesystem::path& path);

// VGG16-shaped container with He-normal kernels and zero biases drawn from a
// seeded generator. Used for tests and demos when no exported checkpoint is
// at hand.
WeightContainer SynthesizeWeights(std::uint64_t seed);

}  // namespace deepssim

#endif  // DEEPSSIM_CORE_WEIGHTS_HPP_
