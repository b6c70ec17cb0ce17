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

#ifndef DEEPSSIM_CORE_IMAGE_HPP_
#define DEEPSSIM_CORE_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace cv {
class Mat;
}

namespace deepssim {

// Decoded RGB raster, row-major interleaved [H, W, 3], values in [0, 1].
struct Image {
  int height = 0;
  int width = 0;
  std::vector<float> pixels;

  Image() = default;
  Image(int h, int w) : height(h), width(w), pixels(std::size_t(h) * w * 3, 0.0f) {}

  float& at(int y, int x, int c) { return pixels[(std::size_t(y) * width + x) * 3 + c]; }
  float at(int y, int x, int c) const { return pixels[(std::size_t(y) * width + x) * 3 + c]; }
  bool empty() const { return pixels.empty(); }
};

// Throws kValidation when dimensions disagree with the buffer, a value falls
// outside [0, 1], or either side is shorter than `min_side`.
void ValidateImage(const Image& image, int min_side = 1);

// PNG, BMP, JPEG and anything else the codec layer reads. Grayscale inputs are
// replicated to three channels; alpha is dropped.
Image LoadImage(const std::filesystem::path& path);
Image DecodeImage(std::span<const std::uint8_t> bytes);

Image ImageFromMat(const cv::Mat& mat);  // BGR or gray, 8U/16U/32F
cv::Mat ImageToMat(const Image& image);  // CV_32FC3, BGR

void SaveImage(const Image& image, const std::filesystem::path& path);
std::vector<std::uint8_t> EncodePng(const Image& image);

}  // namespace deepssim

#endif  // DEEPSSIM_CORE_IMAGE_HPP_
