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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "core/correlation.hpp"
#include "core/error.hpp"

namespace deepssim::stats {
namespace {

long double OraclePearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  long double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += a[i]; sb += b[i];
    saa += (long double)a[i] * a[i];
    sbb += (long double)b[i] * b[i];
    sab += (long double)a[i] * b[i];
  }
  const long double num = n * sab - sa * sb;
  return num / std::sqrt((n * saa - sa * sa) * (n * sbb - sb * sb));
}

std::vector<double> OracleRanks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    int less = 0, equal = 0;
    for (double x : v) {
      less += x < v[i];
      equal += x == v[i];
    }
    r[i] = less + (equal + 1) / 2.0;
  }
  return r;
}

double OracleKendall(const std::vector<double>& a, const std::vector<double>& b) {
  long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0, pairs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      ++pairs;
      const double da = a[i] - a[j], db = b[i] - b[j];
      if (da == 0) ++ties_a;
      if (db == 0) ++ties_b;
      if (da == 0 || db == 0) continue;
      (da > 0) == (db > 0) ? ++concordant : ++discordant;
    }
  }
  return double(concordant - discordant) / std::sqrt(double(pairs - ties_a) * double(pairs - ties_b));
}

std::pair<std::vector<double>, std::vector<double>> RandomPair(std::mt19937_64& rng, bool ties) {
  std::uniform_int_distribution<int> len(3, 60);
  std::normal_distribution<double> normal;
  const int n = len(rng);
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = ties ? std::round(normal(rng) * 2) : normal(rng);
    b[i] = 0.6 * a[i] + (ties ? std::round(normal(rng)) : normal(rng));
  }
  // Guard against the rare all-tied draw.
  a[0] = 10.0;
  b[1] = -10.0;
  return {a, b};
}

TEST(Correlation, PerfectAndReversedRelations) {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {2, 4, 6, 8, 10};
  const std::vector<double> c = {5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(Pearson(a, b), 1.0);
  EXPECT_DOUBLE_EQ(Spearman(a, b), 1.0);
  EXPECT_DOUBLE_EQ(Kendall(a, b), 1.0);
  EXPECT_DOUBLE_EQ(Pearson(a, c), -1.0);
  EXPECT_DOUBLE_EQ(Spearman(a, c), -1.0);
  EXPECT_DOUBLE_EQ(Kendall(a, c), -1.0);
}

TEST(Correlation, KendallOfOneAdjacentSwapInFive) {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {1, 2, 3, 5, 4};
  EXPECT_NEAR(Kendall(a, b), 0.8, 1e-12);
}

TEST(Correlation, FractionalRanksAverageTies) {
  const std::vector<double> v = {10, 20, 20, 5, 20};
  const std::vector<double> want = {2, 4, 4, 1, 4};
  EXPECT_EQ(FractionalRanks(v), want);
}

TEST(Correlation, MatchesBruteForceOraclesOnRandomVectors) {
  std::mt19937_64 rng(2024);
  int instances = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto [a, b] = RandomPair(rng, trial % 2 == 1);
    EXPECT_NEAR(Pearson(a, b), double(OraclePearson(a, b)), 1e-12);
    EXPECT_NEAR(Spearman(a, b), double(OraclePearson(OracleRanks(a), OracleRanks(b))), 1e-12);
    EXPECT_NEAR(Kendall(a, b), OracleKendall(a, b), 1e-12);
    ++instances;
  }
  EXPECT_GE(instances, 200);
}

TEST(Correlation, RankStatisticsAreMonotoneInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto [a, b] = RandomPair(rng, false);
    std::vector<double> e(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) e[i] = std::exp(a[i]) * 3 - 7;
    EXPECT_NEAR(Spearman(a, b), Spearman(e, b), 1e-12);
    EXPECT_NEAR(Kendall(a, b), Kendall(e, b), 1e-12);
    EXPECT_NEAR(Pearson(a, b), Pearson(b, a), 1e-12);
  }
}

TEST(Correlation, DegenerateInputsThrow) {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> flat = {4, 4, 4};
  const std::vector<double> two = {1, 2};
  const std::vector<double> with_nan = {1, std::nan(""), 3};
  EXPECT_THROW(Pearson(a, flat), Error);
  EXPECT_THROW(Spearman(a, flat), Error);
  EXPECT_THROW(Kendall(a, flat), Error);
  EXPECT_THROW(Pearson(two, two), Error);
  EXPECT_THROW(Pearson(a, with_nan), Error);
  EXPECT_THROW(Pearson(a, two), Error);
}

TEST(Logistic, FitOnLinearDataDoesNotLoseToRawPearson) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<double> s(80), y(80);
  for (int i = 0; i < 80; ++i) {
    s[i] = i / 79.0;
    y[i] = 2.0 * s[i] + 1.0 + noise(rng);
  }
  const auto fitted = FitLogisticThenPearson(s, y);
  EXPECT_GE(fitted.plcc, Pearson(s, y) - 1e-6);
}

TEST(Logistic, RecoversTanhShapedRelation) {
  std::vector<double> s, y;
  for (int i = 0; i < 100; ++i) {
    const double x = -3.0 + 6.0 * i / 99.0;
    s.push_back(x);
    y.push_back(std::tanh(x));
  }
  const auto fitted = FitLogisticThenPearson(s, y);
  EXPECT_TRUE(fitted.fit_converged);
  EXPECT_GE(fitted.plcc, 0.999);
  EXPECT_GT(fitted.plcc, Pearson(s, y));
}

TEST(Logistic, FitsExactLogisticCurve) {
  const LogisticParams truth = {4.0, 3.0, 0.5, 1.0};
  std::vector<double> s, y;
  for (int i = 0; i < 60; ++i) {
    s.push_back(i / 59.0);
    y.push_back(Logistic(truth, s.back()));
  }
  const auto fit = FitLogistic(s, y);
  EXPECT_TRUE(fit.converged);
  EXPECT_LT(fit.sse, 1e-8);
  EXPECT_LE(fit.iterations, kLogisticMaxIterations);
}

TEST(Logistic, ConstantPredictionIsDegenerate) {
  const std::vector<double> s = {0.5, 0.5, 0.5, 0.5};
  const std::vector<double> y = {1, 2, 3, 4};
  EXPECT_THROW(FitLogisticThenPearson(s, y), Error);
}

TEST(Logistic, FunctionShape) {
  const LogisticParams beta = {2.0, 1.0, 0.0, 5.0};
  EXPECT_DOUBLE_EQ(Logistic(beta, 0.0), 5.0);
  EXPECT_NEAR(Logistic(beta, 50.0), 5.0 + 1.0, 1e-9);
  EXPECT_NEAR(Logistic(beta, -50.0), 5.0 - 1.0, 1e-9);
}

}  // namespace
}  // namespace deepssim::stats
