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

#ifndef DEEPSSIM_CORE_EVALUATE_HPP_
#define DEEPSSIM_CORE_EVALUATE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/gramsim.hpp"
#include "core/manifest.hpp"

namespace deepssim {

// Correlations between metric scores and subjective judgements. Records with
// LowerBetter polarity are compared against negated subjective values, so a
// good metric reports positive correlations on DMOS and MOS data alike.
struct EvalReport {
  std::size_t n = 0;
  std::size_t skipped = 0;
  bool votes = false;
  std::optional<double> plcc_raw;     // absent for vote data
  std::optional<double> plcc_fitted;
  std::optional<double> srcc;
  bool logistic_converged = false;    // false: plcc_fitted is the raw fallback
  std::vector<std::string> group_ids;
  std::vector<double> per_group_krcc; // vote data only
  double krcc_mean = 0.0;             // vote data: mean over groups; else overall tau-b
  double krcc_std = 0.0;              // population std over groups; 0 otherwise
  double runtime_s = 0.0;
  std::string metric;
};

using ScoreFunction = std::function<double(const EvalRecord&)>;

struct EvalOptions {
  int threads = 1;
  bool votes = false;  // compute per-group KRCC instead of PLCC/SRCC
  // Called once per record, in record order, as scores become available.
  std::function<void(std::size_t index, const EvalRecord& record, double score)> on_score;
};

EvalReport Evaluate(const ScoreFunction& metric, const std::vector<EvalRecord>& records,
                    const EvalOptions& options = {});

// Scores with `scorer`, caching one Gram matrix per distinct reference path.
EvalReport EvaluateDeepSsim(const DeepSsim& scorer, const std::vector<EvalRecord>& records,
                            const EvalOptions& options = {});

// Seeded uniform sample of `count` records without replacement, kept in their
// original order. Returns all records when count >= size.
std::vector<EvalRecord> Subsample(const std::vector<EvalRecord>& records, std::size_t count,
                                  std::uint64_t seed);

std::string ReportToJson(const EvalReport& report);
EvalReport ReportFromJson(const std::string& text);
std::string ReportCsvHeader();
std::string ReportCsvRow(const EvalReport& report);
std::string ReportPlain(const EvalReport& report);

}  // namespace deepssim

#endif  // DEEPSSIM_CORE_EVALUATE_HPP_
