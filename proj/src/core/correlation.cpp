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

#include "core/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "core/error.hpp"

namespace deepssim::stats {
namespace {

void CheckPair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    Fail(ErrorKind::kInvalidArgument, "correlation inputs differ in length (" +
                                          std::to_string(a.size()) + " vs " +
                                          std::to_string(b.size()) + ")");
  }
  if (a.size() < 3) Fail(ErrorKind::kInvalidArgument, "correlation needs at least 3 samples");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      Fail(ErrorKind::kInvalidArgument, "correlation input is not finite");
    }
  }
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

// Solves the 4x4 system in place by Gaussian elimination with partial pivoting.
bool Solve4(std::array<std::array<double, 4>, 4> m, std::array<double, 4> rhs,
            std::array<double, 4>& x) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (!(std::abs(m[pivot][col]) > 1e-300)) return false;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = 3; r >= 0; --r) {
    double acc = rhs[r];
    for (int c = r + 1; c < 4; ++c) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double SumSquares(const LogisticParams& beta, std::span<const double> s, std::span<const double> y) {
  double sse = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = y[i] - Logistic(beta, s[i]);
    sse += r * r;
  }
  return sse;
}

}  // namespace

double Pearson(std::span<const double> a, std::span<const double> b) {
  CheckPair(a, b);
  const double ma = Mean(a);
  const double mb = Mean(b);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) {
    Fail(ErrorKind::kDegenerate, "correlation input has zero variance");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> FractionalRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> a, std::span<const double> b) {
  CheckPair(a, b);
  const auto ra = FractionalRanks(a);
  const auto rb = FractionalRanks(b);
  return Pearson(ra, rb);
}

double Kendall(std::span<const double> a, std::span<const double> b) {
  CheckPair(a, b);
  const std::size_t n = a.size();
  long long concordant_minus_discordant = 0;
  long long ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sa = (a[i] > a[j]) - (a[i] < a[j]);
      const int sb = (b[i] > b[j]) - (b[i] < b[j]);
      if (sa == 0) ++ties_a;
      if (sb == 0) ++ties_b;
      concordant_minus_discordant += sa * sb;
    }
  }
  const double pairs = double(n) * double(n - 1) / 2.0;
  const double denom = std::sqrt((pairs - double(ties_a)) * (pairs - double(ties_b)));
  if (!(denom > 0.0)) Fail(ErrorKind::kDegenerate, "correlation input has zero variance");
  return std::clamp(double(concordant_minus_discordant) / denom, -1.0, 1.0);
}

double Logistic(const LogisticParams& beta, double s) {
  return beta[0] * (0.5 - 1.0 / (1.0 + std::exp(beta[1] * (s - beta[2])))) + beta[3];
}

LogisticFit FitLogistic(std::span<const double> scores, std::span<const double> subjective) {
  CheckPair(scores, subjective);
  const std::size_t n = scores.size();

  // Start from the least-squares line: matching the slope at the midpoint.
  const double ms = Mean(scores);
  const double my = Mean(subjective);
  double sss = 0.0, ssy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sss += (scores[i] - ms) * (scores[i] - ms);
    ssy += (scores[i] - ms) * (subjective[i] - my);
  }
  if (!(sss > 0.0)) Fail(ErrorKind::kDegenerate, "correlation input has zero variance");
  const auto [lo, hi] = std::minmax_element(subjective.begin(), subjective.end());
  const double slope = ssy / sss;
  const double range = std::max(*hi - *lo, 1e-12);
  LogisticFit fit;
  fit.beta = {slope >= 0.0 ? range : -range, 4.0 * std::abs(slope) / range, ms, my};
  if (fit.beta[1] == 0.0) fit.beta[1] = 1.0 / std::sqrt(sss / double(n));
  fit.sse = SumSquares(fit.beta, scores, subjective);

  double lambda = 1e-3;
  for (fit.iterations = 1; fit.iterations <= kLogisticMaxIterations; ++fit.iterations) {
    std::array<std::array<double, 4>, 4> jtj{};
    std::array<double, 4> jtr{};
    for (std::size_t i = 0; i < n; ++i) {
      const double d = scores[i] - fit.beta[2];
      const double sig = 1.0 / (1.0 + std::exp(fit.beta[1] * d));
      const double dsig = sig * (1.0 - sig);
      const std::array<double, 4> grad = {0.5 - sig, fit.beta[0] * dsig * d,
                                          -fit.beta[0] * dsig * fit.beta[1], 1.0};
      const double r = subjective[i] - Logistic(fit.beta, scores[i]);
      for (int p = 0; p < 4; ++p) {
        jtr[p] += grad[p] * r;
        for (int q = 0; q < 4; ++q) jtj[p][q] += grad[p] * grad[q];
      }
    }

    bool accepted = false;
    while (lambda < 1e16) {
      auto damped = jtj;
      for (int p = 0; p < 4; ++p) damped[p][p] += lambda * std::max(jtj[p][p], 1e-12);
      std::array<double, 4> step{};
      if (Solve4(damped, jtr, step)) {
        LogisticParams trial = fit.beta;
        for (int p = 0; p < 4; ++p) trial[p] += step[p];
        const double sse = SumSquares(trial, scores, subjective);
        if (std::isfinite(sse) && sse <= fit.sse) {
          const double improvement = fit.sse > 0.0 ? (fit.sse - sse) / fit.sse : 0.0;
          fit.beta = trial;
          fit.sse = sse;
          lambda = std::max(lambda / 10.0, 1e-12);
          accepted = true;
          if (improvement < kLogisticRelativeTolerance) {
            fit.converged = true;
            return fit;
          }
          break;
        }
      }
      lambda *= 10.0;
    }
    // No damping level reduces the error: we sit at a local minimum.
    if (!accepted) {
      fit.converged = true;
      return fit;
    }
  }
  fit.iterations = kLogisticMaxIterations;
  return fit;
}

FittedCorrelation FitLogisticThenPearson(std::span<const double> scores,
                                         std::span<const double> subjective) {
  FittedCorrelation out;
  out.fit = FitLogistic(scores, subjective);
  if (out.fit.converged) {
    std::vector<double> mapped(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) mapped[i] = Logistic(out.fit.beta, scores[i]);
    try {
      out.plcc = Pearson(mapped, subjective);
      out.fit_converged = true;
      return out;
    } catch (const Error&) {
      // mapped scores collapsed to a constant; fall through to the raw value
    }
  }
  out.plcc = Pearson(scores, subjective);
  out.fit_converged = false;
  return out;
}

}  // namespace deepssim::stats
