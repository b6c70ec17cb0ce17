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

#include "core/gramsim.hpp"

#include <cmath>
#include <string>

#include <cblas.h>

#include "core/error.hpp"

namespace deepssim {

void SimilarityConfig::Validate(int dim) const {
  if (!(xi > 0.0) || !std::isfinite(xi)) Fail(ErrorKind::kInvalidArgument, "xi must be positive");
  if (variant == Variant::kLite) return;
  if (window < 1 || window > dim) {
    Fail(ErrorKind::kInvalidArgument,
         "window " + std::to_string(window) + " outside 1.." + std::to_string(dim));
  }
  if (stride < 1 || (dim - window) % stride != 0) {
    Fail(ErrorKind::kInvalidArgument, "window " + std::to_string(window) + " with stride " +
                                          std::to_string(stride) + " does not tile a " +
                                          std::to_string(dim) + " grid");
  }
}

GramMatrix ComputeGram(const FeatureTensor& features, bool normalize) {
  GramMatrix g;
  g.dim = features.channels;
  g.n_positions = long(features.plane());
  g.data.assign(std::size_t(g.dim) * g.dim, 0.0f);
  if (g.dim == 0 || g.n_positions == 0) return g;

  const float alpha = normalize ? 1.0f / float(g.n_positions) : 1.0f;
  cblas_ssyrk(CblasRowMajor, CblasUpper, CblasNoTrans, g.dim, int(g.n_positions), alpha,
              features.data.data(), int(g.n_positions), 0.0f, g.data.data(), g.dim);
  for (int i = 0; i < g.dim; ++i) {
    for (int j = i + 1; j < g.dim; ++j) g.at(j, i) = g.at(i, j);
  }
  return g;
}

std::vector<WindowStats> WindowStatistics(const GramMatrix& gx, const GramMatrix& gy,
                                          const SimilarityConfig& config) {
  if (gx.dim != gy.dim || gx.data.size() != gy.data.size()) {
    Fail(ErrorKind::kInvalidArgument, "Gram matrices differ in size");
  }
  const int dim = gx.dim;
  config.Validate(dim);
  const int window = config.EffectiveWindow(dim);
  const int stride = config.EffectiveStride(dim);
  const int per_side = (dim - window) / stride + 1;
  const double count = double(window) * window;

  std::vector<WindowStats> stats;
  stats.reserve(std::size_t(per_side) * per_side);
  for (int wy = 0; wy < per_side; ++wy) {
    for (int wx = 0; wx < per_side; ++wx) {
      const int r0 = wy * stride;
      const int c0 = wx * stride;
      double sum_x = 0.0, sum_y = 0.0;
      for (int r = r0; r < r0 + window; ++r) {
        for (int c = c0; c < c0 + window; ++c) {
          sum_x += gx.at(r, c);
          sum_y += gy.at(r, c);
        }
      }
      const double mean_x = sum_x / count;
      const double mean_y = sum_y / count;
      WindowStats s;
      for (int r = r0; r < r0 + window; ++r) {
        for (int c = c0; c < c0 + window; ++c) {
          const double dx = gx.at(r, c) - mean_x;
          const double dy = gy.at(r, c) - mean_y;
          s.var_x += dx * dx;
          s.var_y += dy * dy;
          s.cov += dx * dy;
        }
      }
      s.var_x /= count;
      s.var_y /= count;
      s.cov /= count;
      stats.push_back(s);
    }
  }
  return stats;
}

double CompareGrams(const GramMatrix& gx, const GramMatrix& gy, const SimilarityConfig& config) {
  const auto stats = WindowStatistics(gx, gy, config);
  double total = 0.0;
  for (const WindowStats& s : stats) {
    total += (2.0 * s.cov + config.xi) / (s.var_x + s.var_y + config.xi);
  }
  return total / double(stats.size());
}

DeepSsim::DeepSsim(std::shared_ptr<const WeightContainer> weights, SimilarityConfig config)
    : weights_(std::move(weights)), config_(std::move(config)) {
  if (!weights_) Fail(ErrorKind::kInvalidArgument, "null weight container");
  config_.Validate(kVggChannelChain.back());
}

GramMatrix DeepSsim::Represent(const Image& image) const {
  FeatureTensor features = ExtractFeatures(image, *weights_, config_.backbone);
  if (config_.feature_hook) config_.feature_hook(features);
  return ComputeGram(features, config_.normalize_gram);
}

double DeepSsim::Score(const Image& reference, const Image& test) const {
  return Compare(Represent(reference), Represent(test));
}

double ScoreDeepSsim(const Image& x, const Image& y, const WeightContainer& weights,
                     const SimilarityConfig& config) {
  config.Validate(kVggChannelChain.back());
  auto represent = [&](const Image& image) {
    FeatureTensor f = ExtractFeatures(image, weights, config.backbone);
    if (config.feature_hook) config.feature_hook(f);
    return ComputeGram(f, config.normalize_gram);
  };
  return CompareGrams(represent(x), represent(y), config);
}

double ScoreDeepSsimLite(const Image& x, const Image& y, const WeightContainer& weights) {
  SimilarityConfig config;
  config.variant = Variant::kLite;
  return ScoreDeepSsim(x, y, weights, config);
}

}  // namespace deepssim
