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

#include "core/weights.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

#include "core/error.hpp"
#include "json.hpp"

namespace deepssim {
namespace {

using nlohmann::json;

constexpr std::size_t kLengthPrefixBytes = 8;

std::size_t AlignUp(std::size_t n, std::size_t a) { return (n + a - 1) / a * a; }

std::uint64_t ReadU64Le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void AppendU64Le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void ReadF32Le(const std::uint8_t* p, std::size_t count, std::vector<float>& out) {
  out.resize(count);
  std::memcpy(out.data(), p, count * sizeof(float));
  if constexpr (std::endian::native == std::endian::big) {
    for (float& f : out) {
      auto bits = std::bit_cast<std::uint32_t>(f);
      bits = (bits >> 24) | ((bits >> 8) & 0xff00u) | ((bits << 8) & 0xff0000u) | (bits << 24);
      f = std::bit_cast<float>(bits);
    }
  }
}

void AppendF32Le(std::vector<std::uint8_t>& out, std::span<const float> values) {
  for (float f : values) {
    const auto bits = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(bits >> (8 * i)));
  }
}

std::string OrderName(ChannelOrder o) { return o == ChannelOrder::kRgb ? "RGB" : "BGR"; }
std::string RangeName(ValueRange r) { return r == ValueRange::kUnit ? "unit" : "byte"; }

PreprocessSpec ParsePreprocess(const json& j) {
  PreprocessSpec spec;
  const auto mean = j.at("channel_mean").get<std::vector<float>>();
  const auto stdev = j.at("channel_std").get<std::vector<float>>();
  if (mean.size() != 3 || stdev.size() != 3) {
    Fail(ErrorKind::kFormat, "preprocess mean/std must have 3 entries");
  }
  std::copy(mean.begin(), mean.end(), spec.channel_mean.begin());
  std::copy(stdev.begin(), stdev.end(), spec.channel_std.begin());
  const auto order = j.value("channel_order", std::string("RGB"));
  if (order == "RGB") {
    spec.channel_order = ChannelOrder::kRgb;
  } else if (order == "BGR") {
    spec.channel_order = ChannelOrder::kBgr;
  } else {
    Fail(ErrorKind::kFormat, "unknown channel_order '" + order + "'");
  }
  const auto range = j.value("value_range", std::string("unit"));
  if (range == "unit") {
    spec.value_range = ValueRange::kUnit;
  } else if (range == "byte") {
    spec.value_range = ValueRange::kByte;
  } else {
    Fail(ErrorKind::kFormat, "unknown value_range '" + range + "'");
  }
  return spec;
}

// Bounds-checked view into the payload region.
const std::uint8_t* PayloadSlice(std::span<const std::uint8_t> payload, std::uint64_t offset,
                                 std::uint64_t length, const std::string& what) {
  if (offset > payload.size() || length > payload.size() - offset) {
    Fail(ErrorKind::kFormat, what + ": payload range out of bounds (file truncated?)");
  }
  return payload.data() + offset;
}

}  // namespace

void PreprocessSpec::Validate() const {
  for (int c = 0; c < 3; ++c) {
    if (!(channel_std[c] > 0.0f) || !std::isfinite(channel_std[c])) {
      Fail(ErrorKind::kValidation, "preprocess channel_std must be strictly positive");
    }
    if (!std::isfinite(channel_mean[c])) {
      Fail(ErrorKind::kValidation, "preprocess channel_mean must be finite");
    }
  }
}

void ValidateWeights(const WeightContainer& weights) {
  weights.preprocess.Validate();
  const auto& layers = weights.layers;
  for (std::size_t i = 0; i < kVggLayerNames.size(); ++i) {
    const std::string expected(kVggLayerNames[i]);
    if (i >= layers.size()) {
      Fail(ErrorKind::kValidation, "shape chain mismatch: missing layer " + expected);
    }
    const ConvLayer& layer = layers[i];
    if (layer.name != expected) {
      Fail(ErrorKind::kValidation, "shape chain mismatch: expected layer " + expected +
                                       " at position " + std::to_string(i) + ", found '" +
                                       layer.name + "'");
    }
    if (layer.in_channels != kVggChannelChain[i] || layer.out_channels != kVggChannelChain[i + 1]) {
      Fail(ErrorKind::kValidation,
           "shape chain mismatch in " + expected + ": expected " +
               std::to_string(kVggChannelChain[i]) + "->" + std::to_string(kVggChannelChain[i + 1]) +
               ", found " + std::to_string(layer.in_channels) + "->" +
               std::to_string(layer.out_channels));
    }
    if (layer.kernel_h != 3 || layer.kernel_w != 3) {
      Fail(ErrorKind::kValidation, "shape chain mismatch in " + expected + ": kernel is not 3x3");
    }
    const std::size_t kernel_size = std::size_t(layer.out_channels) * layer.in_channels * 9;
    if (layer.kernel.size() != kernel_size || layer.bias.size() != std::size_t(layer.out_channels)) {
      Fail(ErrorKind::kValidation, "tensor size mismatch in " + expected);
    }
    for (float v : layer.kernel) {
      if (!std::isfinite(v)) Fail(ErrorKind::kValidation, "non-finite value in " + expected + " kernel");
    }
    for (float v : layer.bias) {
      if (!std::isfinite(v)) Fail(ErrorKind::kValidation, "non-finite value in " + expected + " bias");
    }
  }
  if (layers.size() != kVggLayerNames.size()) {
    Fail(ErrorKind::kValidation, "shape chain mismatch: unexpected layer '" +
                                     layers[kVggLayerNames.size()].name + "' after conv5_1");
  }
}

WeightContainer ParseWeights(std::span<const std::uint8_t> bytes) {
  const std::size_t prelude = kContainerMagic.size() + kLengthPrefixBytes;
  if (bytes.size() < prelude ||
      std::memcmp(bytes.data(), kContainerMagic.data(), kContainerMagic.size()) != 0) {
    Fail(ErrorKind::kFormat, "malformed header: bad magic (expected DSIMW001)");
  }
  const std::uint64_t header_len = ReadU64Le(bytes.data() + kContainerMagic.size());
  if (header_len > bytes.size() - prelude) {
    Fail(ErrorKind::kFormat, "malformed header: header length exceeds file size");
  }
  const std::size_t payload_start = AlignUp(prelude + header_len, kPayloadAlignment);
  if (payload_start > bytes.size()) {
    Fail(ErrorKind::kFormat, "malformed header: payload region missing");
  }
  const auto payload = bytes.subspan(payload_start);

  WeightContainer out;
  try {
    const json header = json::parse(bytes.begin() + prelude, bytes.begin() + prelude + header_len);
    out.format_version = header.at("format_version").get<int>();
    if (out.format_version != 1) {
      Fail(ErrorKind::kFormat, "unsupported format_version " + std::to_string(out.format_version));
    }
    out.source = header.value("source", std::string());
    out.preprocess = ParsePreprocess(header.at("preprocess"));

    for (const json& rec : header.at("layers")) {
      ConvLayer layer;
      layer.name = rec.at("name").get<std::string>();
      if (rec.value("dtype", std::string("f32")) != "f32") {
        Fail(ErrorKind::kFormat, "layer " + layer.name + ": unsupported dtype");
      }
      const auto shape = rec.at("shape").get<std::vector<std::int64_t>>();
      if (shape.size() != 4) Fail(ErrorKind::kFormat, "layer " + layer.name + ": shape is not 4-D");
      for (auto d : shape) {
        if (d <= 0 || d > 65536) Fail(ErrorKind::kFormat, "layer " + layer.name + ": bad dimension");
      }
      layer.out_channels = int(shape[0]);
      layer.in_channels = int(shape[1]);
      layer.kernel_h = int(shape[2]);
      layer.kernel_w = int(shape[3]);
      const std::size_t kernel_count = std::size_t(shape[0] * shape[1] * shape[2] * shape[3]);
      const std::size_t bias_count = std::size_t(shape[0]);
      const auto offset = rec.at("byte_offset").get<std::uint64_t>();
      const auto length = rec.at("byte_length").get<std::uint64_t>();
      if (length != (kernel_count + bias_count) * sizeof(float)) {
        Fail(ErrorKind::kFormat, "layer " + layer.name + ": byte_length does not match shape");
      }
      const std::uint8_t* p = PayloadSlice(payload, offset, length, "layer " + layer.name);
      ReadF32Le(p, kernel_count, layer.kernel);
      ReadF32Le(p + kernel_count * sizeof(float), bias_count, layer.bias);
      out.layers.push_back(std::move(layer));
    }

    if (header.contains("test_vector") && !header["test_vector"].is_null()) {
      const json& tv = header["test_vector"];
      TestVector vec;
      const auto png_off = tv.at("input_image_png_bytes_offset").get<std::uint64_t>();
      const auto png_len = tv.at("input_image_png_bytes_length").get<std::uint64_t>();
      const auto act_off = tv.at("expected_conv5_1_offset").get<std::uint64_t>();
      const auto act_len = tv.at("expected_conv5_1_length").get<std::uint64_t>();
      if (act_len % sizeof(float) != 0) Fail(ErrorKind::kFormat, "test vector: ragged activation");
      const std::uint8_t* png = PayloadSlice(payload, png_off, png_len, "test vector image");
      vec.png.assign(png, png + png_len);
      ReadF32Le(PayloadSlice(payload, act_off, act_len, "test vector activation"),
                act_len / sizeof(float), vec.expected);
      out.test_vector = std::move(vec);
    }
  } catch (const json::exception& e) {
    Fail(ErrorKind::kFormat, std::string("malformed header: ") + e.what());
  }

  ValidateWeights(out);
  return out;
}

WeightContainer LoadWeights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open weights file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return ParseWeights(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> SerializeWeights(const WeightContainer& weights) {
  ValidateWeights(weights);

  std::vector<std::uint8_t> payload;
  auto pad = [&payload] { payload.resize(AlignUp(payload.size(), kPayloadAlignment), 0); };

  json layers = json::array();
  for (const ConvLayer& layer : weights.layers) {
    pad();
    const std::size_t offset = payload.size();
    AppendF32Le(payload, layer.kernel);
    AppendF32Le(payload, layer.bias);
    layers.push_back({{"name", layer.name},
                      {"shape", {layer.out_channels, layer.in_channels, layer.kernel_h, layer.kernel_w}},
                      {"dtype", "f32"},
                      {"byte_offset", offset},
                      {"byte_length", payload.size() - offset}});
  }

  const auto& pp = weights.preprocess;
  json header = {
      {"format_version", weights.format_version},
      {"source", weights.source},
      {"preprocess",
       {{"channel_mean", pp.channel_mean},
        {"channel_std", pp.channel_std},
        {"channel_order", OrderName(pp.channel_order)},
        {"value_range", RangeName(pp.value_range)}}},
      {"layers", layers}};

  if (weights.test_vector) {
    pad();
    const std::size_t png_off = payload.size();
    payload.insert(payload.end(), weights.test_vector->png.begin(), weights.test_vector->png.end());
    pad();
    const std::size_t act_off = payload.size();
    AppendF32Le(payload, weights.test_vector->expected);
    header["test_vector"] = {{"input_image_png_bytes_offset", png_off},
                             {"input_image_png_bytes_length", weights.test_vector->png.size()},
                             {"expected_conv5_1_offset", act_off},
                             {"expected_conv5_1_length", payload.size() - act_off}};
  }

  const std::string text = header.dump();
  std::vector<std::uint8_t> out(kContainerMagic.begin(), kContainerMagic.end());
  AppendU64Le(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  out.resize(AlignUp(out.size(), kPayloadAlignment), 0);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

void SaveWeights(const WeightContainer& weights, const std::filesystem::path& path) {
  const auto bytes = SerializeWeights(weights);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write weights file " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) Fail(ErrorKind::kIo, "short write to " + path.string());
}

WeightContainer SynthesizeWeights(std::uint64_t seed) {
  WeightContainer w;
  w.source = "synthetic:he-normal:seed=" + std::to_string(seed);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < kVggLayerNames.size(); ++i) {
    ConvLayer layer;
    layer.name = std::string(kVggLayerNames[i]);
    layer.in_channels = kVggChannelChain[i];
    layer.out_channels = kVggChannelChain[i + 1];
    layer.kernel_h = layer.kernel_w = 3;
    const float stddev = std::sqrt(2.0f / float(layer.in_channels * 9));
    std::normal_distribution<float> normal(0.0f, stddev);
    layer.kernel.resize(std::size_t(layer.out_channels) * layer.in_channels * 9);
    for (float& v : layer.kernel) v = normal(rng);
    layer.bias.assign(layer.out_channels, 0.0f);
    w.layers.push_back(std::move(layer));
  }
  return w;
}

}  // namespace deepssim
