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

#include "core/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "core/error.hpp"

namespace deepssim {

void ValidateImage(const Image& image, int min_side) {
  if (image.height <= 0 || image.width <= 0 ||
      image.pixels.size() != std::size_t(image.height) * image.width * 3) {
    Fail(ErrorKind::kValidation, "image buffer does not match its dimensions");
  }
  if (image.height < min_side || image.width < min_side) {
    Fail(ErrorKind::kValidation,
         "image is " + std::to_string(image.width) + "x" + std::to_string(image.height) +
             ", below the minimum side of " + std::to_string(min_side));
  }
  for (float v : image.pixels) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      Fail(ErrorKind::kValidation, "image value outside [0, 1]");
    }
  }
}

Image ImageFromMat(const cv::Mat& mat) {
  if (mat.empty()) Fail(ErrorKind::kFormat, "empty image");
  cv::Mat bgr;
  switch (mat.channels()) {
    case 1: cv::cvtColor(mat, bgr, cv::COLOR_GRAY2BGR); break;
    case 3: bgr = mat; break;
    case 4: cv::cvtColor(mat, bgr, cv::COLOR_BGRA2BGR); break;
    default: Fail(ErrorKind::kFormat, "unsupported channel count " + std::to_string(mat.channels()));
  }
  double scale = 1.0;
  switch (bgr.depth()) {
    case CV_8U: scale = 1.0 / 255.0; break;
    case CV_16U: scale = 1.0 / 65535.0; break;
    case CV_32F: case CV_64F: scale = 1.0; break;
    default: Fail(ErrorKind::kFormat, "unsupported pixel depth");
  }
  cv::Mat f;
  bgr.convertTo(f, CV_32FC3, scale);

  Image out(f.rows, f.cols);
  for (int y = 0; y < f.rows; ++y) {
    const auto* row = f.ptr<cv::Vec3f>(y);
    for (int x = 0; x < f.cols; ++x) {
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = std::clamp(row[x][2 - c], 0.0f, 1.0f);
      }
    }
  }
  return out;
}

cv::Mat ImageToMat(const Image& image) {
  cv::Mat mat(image.height, image.width, CV_32FC3);
  for (int y = 0; y < image.height; ++y) {
    auto* row = mat.ptr<cv::Vec3f>(y);
    for (int x = 0; x < image.width; ++x) {
      for (int c = 0; c < 3; ++c) row[x][2 - c] = image.at(y, x, c);
    }
  }
  return mat;
}

Image LoadImage(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    Fail(ErrorKind::kIo, "cannot open image " + path.string());
  }
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED | cv::IMREAD_IGNORE_ORIENTATION);
  if (mat.empty()) Fail(ErrorKind::kFormat, "cannot decode image " + path.string());
  return ImageFromMat(mat);
}

Image DecodeImage(std::span<const std::uint8_t> bytes) {
  cv::Mat raw(1, int(bytes.size()), CV_8U, const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat mat = cv::imdecode(raw, cv::IMREAD_UNCHANGED | cv::IMREAD_IGNORE_ORIENTATION);
  if (mat.empty()) Fail(ErrorKind::kFormat, "cannot decode image bytes");
  return ImageFromMat(mat);
}

namespace {

cv::Mat ToMat8(const Image& image) {
  cv::Mat out;
  ImageToMat(image).convertTo(out, CV_8UC3, 255.0);
  return out;
}

}  // namespace

void SaveImage(const Image& image, const std::filesystem::path& path) {
  if (!cv::imwrite(path.string(), ToMat8(image))) {
    Fail(ErrorKind::kIo, "cannot write image " + path.string());
  }
}

std::vector<std::uint8_t> EncodePng(const Image& image) {
  std::vector<std::uint8_t> bytes;
  if (!cv::imencode(".png", ToMat8(image), bytes)) Fail(ErrorKind::kFormat, "png encode failed");
  return bytes;
}

}  // namespace deepssim
