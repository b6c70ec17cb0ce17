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

#ifndef DEEPSSIM_CORE_GRAMSIM_HPP_
#define DEEPSSIM_CORE_GRAMSIM_HPP_

#include <functional>
#include <memory>
#include <vector>

#include "core/backbone.hpp"
#include "core/image.hpp"
#include "core/weights.hpp"

namespace deepssim {

// Channel self-correlation of a feature block, dim x dim (512 for conv5_1).
struct GramMatrix {
  int dim = 0;
  long n_positions = 0;
  std::vector<float> data;

  float& at(int i, int j) { return data[std::size_t(i) * dim + j]; }
  float at(int i, int j) const { return data[std::size_t(i) * dim + j]; }
};

enum class Variant { kStandard, kLite };

// Reweights features in place before the Gram matrix is formed. Reserved for
// attention calibration; empty means features pass through untouched.
using FeatureHook = std::function<void(FeatureTensor&)>;

struct SimilarityConfig {
  int window = 4;
  int stride = 4;
  double xi = 1e-8;
  bool normalize_gram = true;
  Variant variant = Variant::kStandard;
  BackboneOptions backbone;
  FeatureHook feature_hook;

  // Window side actually used for a grid of side `dim` (Lite uses one window).
  int EffectiveWindow(int dim) const { return variant == Variant::kLite ? dim : window; }
  int EffectiveStride(int dim) const { return variant == Variant::kLite ? dim : stride; }

  // Throws kInvalidArgument unless the windows tile a dim x dim grid and xi > 0.
  void Validate(int dim = 512) const;
};

// Population statistics of one window pair.
struct WindowStats {
  double var_x = 0.0;
  double var_y = 0.0;
  double cov = 0.0;
};

// F * F^T over the flattened spatial grid, divided by h*w when `normalize`.
GramMatrix ComputeGram(const FeatureTensor& features, bool normalize);

// Windows are visited row-major over top-left corners 0, stride, ..., dim-window.
std::vector<WindowStats> WindowStatistics(const GramMatrix& gx, const GramMatrix& gy,
                                          const SimilarityConfig& config);

// Mean over windows of (2 cov + xi) / (var_x + var_y + xi).
double CompareGrams(const GramMatrix& gx, const GramMatrix& gy, const SimilarityConfig& config);

// Scores image pairs against one weight container. Immutable after
// construction; safe to share across threads.
class DeepSsim {
 public:
  DeepSsim(std::shared_ptr<const WeightContainer> weights, SimilarityConfig config);

  GramMatrix Represent(const Image& image) const;
  double Compare(const GramMatrix& reference, const GramMatrix& test) const {
    return CompareGrams(reference, test, config_);
  }
  double Score(const Image& reference, const Image& test) const;

  const SimilarityConfig& config() const { return config_; }
  const WeightContainer& weights() const { return *weights_; }

 private:
  std::shared_ptr<const WeightContainer> weights_;
  SimilarityConfig config_;
};

double ScoreDeepSsim(const Image& x, const Image& y, const WeightContainer& weights,
                     const SimilarityConfig& config = {});
double ScoreDeepSsimLite(const Image& x, const Image& y, const WeightContainer& weights);

}  // namespace deepssim

#endif  // DEEPSSIM_CORE_GRAMSIM_HPP_
