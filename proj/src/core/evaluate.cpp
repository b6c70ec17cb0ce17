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

#include "core/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <future>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "core/correlation.hpp"
#include "core/error.hpp"
#include "json.hpp"

namespace deepssim {
namespace {

using nlohmann::json;

std::vector<double> ScoreAll(const ScoreFunction& metric, const std::vector<EvalRecord>& records,
                             const EvalOptions& options) {
  const std::size_t n = records.size();
  std::vector<double> scores(n, 0.0);
  std::vector<char> done(n, 0);
  std::size_t emitted = 0;
  std::mutex mu;
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    for (std::size_t i = next++; i < n && !stop; i = next++) {
      double s = 0.0;
      try {
        s = metric(records[i]);
        if (!std::isfinite(s)) {
          Fail(ErrorKind::kDegenerate, "non-finite score for " + records[i].test_path.string());
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        stop = true;
        return;
      }
      std::lock_guard<std::mutex> lock(mu);
      scores[i] = s;
      done[i] = 1;
      while (emitted < n && done[emitted]) {
        if (options.on_score) options.on_score(emitted, records[emitted], scores[emitted]);
        ++emitted;
      }
    }
  };

  const int threads = std::max(1, std::min<int>(options.threads, int(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return scores;
}

double PopulationStd(const std::vector<double>& v, double mean) {
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / double(v.size()));
}

json Optional(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> OptionalFrom(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string Fixed(const std::optional<double>& v) { return v ? Fixed(*v) : std::string(); }

}  // namespace

EvalReport Evaluate(const ScoreFunction& metric, const std::vector<EvalRecord>& records,
                    const EvalOptions& options) {
  if (records.empty()) Fail(ErrorKind::kValidation, "no records");
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> scores = ScoreAll(metric, records, options);

  EvalReport report;
  report.n = records.size();
  report.votes = options.votes;

  std::vector<double> aligned(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    aligned[i] = records[i].polarity == Polarity::kLowerBetter ? -records[i].subjective
                                                               : records[i].subjective;
  }

  if (options.votes) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!records[i].group_id) Fail(ErrorKind::kValidation, "vote record without a group id");
      groups[*records[i].group_id].push_back(i);
    }
    for (const auto& [id, members] : groups) {
      std::vector<double> s, v;
      for (std::size_t i : members) {
        s.push_back(scores[i]);
        v.push_back(aligned[i]);
      }
      if (members.size() < 2) continue;
      try {
        const double tau = s.size() == 2
                               ? double(((s[0] > s[1]) - (s[0] < s[1])) * ((v[0] > v[1]) - (v[0] < v[1])))
                               : stats::Kendall(s, v);
        report.group_ids.push_back(id);
        report.per_group_krcc.push_back(tau);
      } catch (const Error& e) {
        Warn("group " + id + " skipped for KRCC: " + e.what());
      }
    }
    if (report.per_group_krcc.empty()) Fail(ErrorKind::kDegenerate, "no group admits a KRCC");
    report.krcc_mean = std::accumulate(report.per_group_krcc.begin(), report.per_group_krcc.end(), 0.0) /
                       double(report.per_group_krcc.size());
    report.krcc_std = PopulationStd(report.per_group_krcc, report.krcc_mean);
  } else {
    report.plcc_raw = stats::Pearson(scores, aligned);
    const auto fitted = stats::FitLogisticThenPearson(scores, aligned);
    report.plcc_fitted = fitted.plcc;
    report.logistic_converged = fitted.fit_converged;
    report.srcc = stats::Spearman(scores, aligned);
    report.krcc_mean = stats::Kendall(scores, aligned);
  }

  report.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

EvalReport EvaluateDeepSsim(const DeepSsim& scorer, const std::vector<EvalRecord>& records,
                            const EvalOptions& options) {
  std::mutex mu;
  std::map<std::string, std::shared_future<GramMatrix>> references;

  auto reference = [&](const std::filesystem::path& path) {
    std::promise<GramMatrix> promise;
    std::shared_future<GramMatrix> future;
    bool owner = false;
    {
      std::lock_guard<std::mutex> lock(mu);
      auto [it, inserted] = references.try_emplace(path.string());
      if (inserted) {
        it->second = promise.get_future().share();
        owner = true;
      }
      future = it->second;
    }
    if (owner) {
      try {
        promise.set_value(scorer.Represent(LoadImage(path)));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  };

  ScoreFunction metric = [&](const EvalRecord& r) {
    const GramMatrix ref = reference(r.ref_path);
    return scorer.Compare(ref, scorer.Represent(LoadImage(r.test_path)));
  };
  EvalReport report = Evaluate(metric, records, options);
  report.metric = scorer.config().variant == Variant::kLite ? "DeepSSIM-Lite" : "DeepSSIM";
  return report;
}

std::vector<EvalRecord> Subsample(const std::vector<EvalRecord>& records, std::size_t count,
                                  std::uint64_t seed) {
  if (count >= records.size()) return records;
  std::vector<std::size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates with an explicit draw so the sample depends only on
  // the seed, not on the standard library's distribution code.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t span = idx.size() - i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
      draw = rng();
    } while (draw >= limit);
    std::swap(idx[i], idx[i + draw % span]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<EvalRecord> out;
  out.reserve(count);
  for (std::size_t i : idx) out.push_back(records[i]);
  return out;
}

std::string ReportToJson(const EvalReport& r) {
  json j = {{"metric", r.metric},
            {"n", r.n},
            {"skipped", r.skipped},
            {"votes", r.votes},
            {"plcc_raw", Optional(r.plcc_raw)},
            {"plcc_fitted", Optional(r.plcc_fitted)},
            {"logistic_converged", r.logistic_converged},
            {"srcc", Optional(r.srcc)},
            {"krcc_mean", r.krcc_mean},
            {"krcc_std", r.krcc_std},
            {"runtime_s", r.runtime_s},
            {"sign_convention", "LowerBetter subjective scores are negated before correlation"}};
  if (r.votes) {
    json groups = json::array();
    for (std::size_t i = 0; i < r.per_group_krcc.size(); ++i) {
      groups.push_back({{"group_id", r.group_ids[i]}, {"krcc", r.per_group_krcc[i]}});
    }
    j["per_group_krcc"] = groups;
  } else {
    j["per_group_krcc"] = nullptr;
  }
  return j.dump(2);
}

EvalReport ReportFromJson(const std::string& text) {
  EvalReport r;
  try {
    const json j = json::parse(text);
    r.metric = j.value("metric", std::string());
    r.n = j.at("n").get<std::size_t>();
    r.skipped = j.value("skipped", std::size_t(0));
    r.votes = j.value("votes", false);
    r.plcc_raw = OptionalFrom(j, "plcc_raw");
    r.plcc_fitted = OptionalFrom(j, "plcc_fitted");
    r.logistic_converged = j.value("logistic_converged", false);
    r.srcc = OptionalFrom(j, "srcc");
    r.krcc_mean = j.at("krcc_mean").get<double>();
    r.krcc_std = j.at("krcc_std").get<double>();
    r.runtime_s = j.value("runtime_s", 0.0);
    if (j.contains("per_group_krcc") && j["per_group_krcc"].is_array()) {
      for (const auto& g : j["per_group_krcc"]) {
        r.group_ids.push_back(g.at("group_id").get<std::string>());
        r.per_group_krcc.push_back(g.at("krcc").get<double>());
      }
    }
  } catch (const json::exception& e) {
    Fail(ErrorKind::kFormat, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string ReportCsvHeader() {
  return "metric,n,skipped,plcc_raw,plcc_fitted,logistic_converged,srcc,krcc_mean,krcc_std,runtime_s";
}

std::string ReportCsvRow(const EvalReport& r) {
  std::ostringstream out;
  out << CsvField(r.metric) << ',' << r.n << ',' << r.skipped << ',' << Fixed(r.plcc_raw) << ','
      << Fixed(r.plcc_fitted) << ',' << (r.logistic_converged ? 1 : 0) << ',' << Fixed(r.srcc) << ','
      << Fixed(r.krcc_mean) << ',' << Fixed(r.krcc_std) << ',' << Fixed(r.runtime_s);
  return out.str();
}

std::string ReportPlain(const EvalReport& r) {
  std::ostringstream out;
  out << "metric       " << (r.metric.empty() ? "-" : r.metric) << '\n'
      << "records      " << r.n << " (" << r.skipped << " skipped)\n";
  if (r.votes) {
    out << "groups       " << r.per_group_krcc.size() << '\n'
        << "KRCC mean    " << Fixed(r.krcc_mean) << '\n'
        << "KRCC std     " << Fixed(r.krcc_std) << '\n';
  } else {
    out << "PLCC raw     " << Fixed(r.plcc_raw) << '\n'
        << "PLCC fitted  " << Fixed(r.plcc_fitted) << (r.logistic_converged ? "" : " (logistic fit failed; raw)")
        << '\n'
        << "SRCC         " << Fixed(r.srcc) << '\n'
        << "KRCC         " << Fixed(r.krcc_mean) << '\n';
  }
  out << "runtime      " << Fixed(r.runtime_s) << " s\n";
  return out.str();
}

}  // namespace deepssim
