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

#ifndef DEEPSSIM_CORE_ROBUSTNESS_HPP_
#define DEEPSSIM_CORE_ROBUSTNESS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "core/gramsim.hpp"
#include "core/image.hpp"

namespace deepssim {

// Geometric change applied to a reference. Resampling is bilinear; rotation
// and translation replicate edge pixels and keep the input canvas (rotated
// corners are cropped). Scale resizes the canvas; shear widens it so the
// whole sheared image fits.
struct Transform {
  enum class Kind { kRotate, kTranslate, kScale, kShear };
  Kind kind = Kind::kRotate;
  double a = 0.0;  // degrees, dx, factor, or shear factor
  double b = 0.0;  // dy for translations

  static Transform Rotate(double degrees) { return {Kind::kRotate, degrees, 0.0}; }
  static Transform Translate(double dx, double dy) { return {Kind::kTranslate, dx, dy}; }
  static Transform Scale(double factor) { return {Kind::kScale, factor, 0.0}; }
  static Transform Shear(double factor) { return {Kind::kShear, factor, 0.0}; }

  bool IsIdentity() const;
  std::string Name() const;
  std::string Param() const;
};

// Bench parameter ranges. Transforms outside them are rejected by ParseGrid.
inline constexpr double kMaxRotationDeg = 180.0;
inline constexpr double kMaxTranslationPx = 512.0;
inline constexpr double kMinScale = 0.05;
inline constexpr double kMaxScale = 8.0;
inline constexpr double kMaxShear = 2.0;

// Throws kValidation when the result would be smaller than the backbone minimum.
Image ApplyTransform(const Image& image, const Transform& transform);

// ';'-separated items, each `name=start:stop:step` (stop inclusive) or
// `name=v1,v2,...`. Names: rotate, translate (dx, dy = 0), translate_y,
// scale, shear.
std::vector<Transform> ParseGrid(std::string_view text);

struct NamedImage {
  std::string name;
  Image image;
};

struct RobustnessCase {
  std::string image;
  Transform transform;
  double score = 0.0;
};

struct BenchResult {
  std::vector<RobustnessCase> cases;
  std::vector<std::string> skipped;  // one message per skipped image or case
};

// Scores every image against each transformed copy of itself. With
// `skip_invalid`, undersized images and transforms are reported in `skipped`
// instead of throwing.
BenchResult RobustnessBench(const std::vector<NamedImage>& images, const DeepSsim& scorer,
                            const std::vector<Transform>& grid, bool skip_invalid = false);

std::string BenchCsv(const std::vector<RobustnessCase>& cases);
std::string BenchJson(const std::vector<RobustnessCase>& cases);

}  // namespace deepssim

#endif  // DEEPSSIM_CORE_ROBUSTNESS_HPP_
