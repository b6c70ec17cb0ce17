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

#ifndef DEEPSSIM_CORE_CORRELATION_HPP_
#define DEEPSSIM_CORE_CORRELATION_HPP_

#include <array>
#include <span>
#include <vector>

namespace deepssim::stats {

// All functions require equal lengths >= 3 and throw kDegenerate, never
// return NaN, when an input has no variance.
double Pearson(std::span<const double> a, std::span<const double> b);
double Spearman(std::span<const double> a, std::span<const double> b);
double Kendall(std::span<const double> a, std::span<const double> b);  // tau-b

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> FractionalRanks(std::span<const double> values);

// q(s) = b1 * (1/2 - 1 / (1 + exp(b2 * (s - b3)))) + b4
using LogisticParams = std::array<double, 4>;
double Logistic(const LogisticParams& beta, double s);

struct LogisticFit {
  LogisticParams beta{};
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline constexpr int kLogisticMaxIterations = 500;
inline constexpr double kLogisticRelativeTolerance = 1e-10;

// Levenberg-Marquardt least squares fit of the four-parameter logistic.
LogisticFit FitLogistic(std::span<const double> scores, std::span<const double> subjective);

struct FittedCorrelation {
  double plcc = 0.0;
  bool fit_converged = false;  // false: plcc is the raw Pearson fallback
  LogisticFit fit;
};

FittedCorrelation FitLogisticThenPearson(std::span<const double> scores,
                                         std::span<const double> subjective);

}  // namespace deepssim::stats

#endif  // DEEPSSIM_CORE_CORRELATION_HPP_
