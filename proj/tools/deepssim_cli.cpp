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

// deepssim: command-line front end over the C API.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 validation error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "deepssim/deepssim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

struct CliConfig {
  std::string weights;
  std::string variant = "standard";
  int window = 4;
  int stride = 4;
  double xi = 1e-8;
  bool normalize_gram = true;
  bool pre_relu = false;
  int threads = 1;
  std::string output = "plain";
  std::uint64_t seed = 0;
};

struct Deleter {
  void operator()(dsim_weights* p) const { dsim_weights_free(p); }
  void operator()(dsim_scorer* p) const { dsim_scorer_free(p); }
  void operator()(dsim_report* p) const { dsim_report_free(p); }
  void operator()(char* p) const { dsim_string_free(p); }
};
template <typename T>
using Owned = std::unique_ptr<T, Deleter>;

// Carries a C API failure up to main() with its exit code.
struct Failure {
  int code;
  std::string message;
};

void Check(dsim_status status, const std::string& context) {
  if (status == DSIM_OK) return;
  const int code = status == DSIM_ERR_IO ? kExitIo : kExitValidation;
  throw Failure{code, context + ": " + dsim_last_error()};
}

void AddScoringOptions(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--weights", cfg.weights, "Weight container (falls back to $DEEPSIM_WEIGHTS)");
  cmd->add_option("--variant", cfg.variant, "standard or lite")
      ->check(CLI::IsMember({"standard", "lite"}))
      ->capture_default_str();
  cmd->add_option("--window", cfg.window, "Window side over the Gram grid")->capture_default_str();
  cmd->add_option("--stride", cfg.stride, "Window step")->capture_default_str();
  cmd->add_option("--xi", cfg.xi, "Stabilizing constant")->capture_default_str();
  cmd->add_option("--normalize-gram", cfg.normalize_gram, "Divide the Gram matrix by the spatial size")
      ->capture_default_str();
  cmd->add_flag("--pre-relu", cfg.pre_relu, "Use conv5_1 before its ReLU");
  cmd->add_option("--output", cfg.output, "json, csv or plain")
      ->check(CLI::IsMember({"json", "csv", "plain"}))
      ->capture_default_str();
}

Owned<dsim_scorer> MakeScorer(const CliConfig& cfg) {
  std::string path = cfg.weights;
  if (path.empty()) {
    if (const char* env = std::getenv("DEEPSIM_WEIGHTS")) path = env;
  }
  if (path.empty()) throw Failure{kExitUsage, "no weights: pass --weights or set DEEPSIM_WEIGHTS"};

  dsim_weights* weights = nullptr;
  Check(dsim_weights_load(path.c_str(), &weights), "loading weights " + path);
  Owned<dsim_weights> owned_weights(weights);

  dsim_config config;
  dsim_config_default(&config);
  config.variant = cfg.variant == "lite" ? DSIM_VARIANT_LITE : DSIM_VARIANT_STANDARD;
  config.window = cfg.window;
  config.stride = cfg.stride;
  config.xi = cfg.xi;
  config.normalize_gram = cfg.normalize_gram ? 1 : 0;
  config.pre_relu = cfg.pre_relu ? 1 : 0;
  dsim_scorer* scorer = nullptr;
  Check(dsim_scorer_create(owned_weights.get(), &config, &scorer), "configuring scorer");
  return Owned<dsim_scorer>(scorer);
}

void PrintReport(const dsim_report* report, const std::string& format, const std::string& save_json) {
  char* text = nullptr;
  Check(dsim_report_format(report, format.c_str(), &text), "formatting report");
  Owned<char> owned(text);
  std::fputs(text, stdout);
  if (!save_json.empty()) {
    char* json = nullptr;
    Check(dsim_report_format(report, "json", &json), "formatting report");
    Owned<char> owned_json(json);
    std::ofstream out(save_json, std::ios::trunc);
    out << json;
    if (!out) throw Failure{kExitIo, "cannot write " + save_json};
  }
}

void WarningToStderr(const char* message, void*) { std::fprintf(stderr, "warning: %s\n", message); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DeepSSIM full-reference image quality: score, evaluate, adapt datasets, bench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dsim_version()));

  CliConfig cfg;

  std::string ref_path, test_path;
  auto* score = app.add_subcommand("score", "Score a test image against a reference");
  score->add_option("reference", ref_path, "Reference image")->required();
  score->add_option("test", test_path, "Test image (any size)")->required();
  AddScoringOptions(score, cfg);

  std::string manifest, scores_csv, report_json;
  std::size_t sample = 0;
  auto* eval = app.add_subcommand("eval", "Evaluate against a manifest and print PLCC/SRCC/KRCC");
  eval->add_option("manifest", manifest, "Manifest CSV")->required();
  AddScoringOptions(eval, cfg);
  eval->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--sample", sample, "Score a seeded random subset of this many records");
  eval->add_option("--seed", cfg.seed, "Subsampling seed")->capture_default_str();
  eval->add_option("--scores", scores_csv, "Per-record score CSV (default <manifest>.scores.csv)");
  eval->add_option("--report", report_json, "Also write the report as JSON here");

  std::string kind, root, out_manifest;
  auto* adapt = app.add_subcommand("adapt", "Convert a dataset in its published layout to a manifest");
  adapt->add_option("kind", kind, "LIVE, CSIQ, TID2013, KADID10K, QADS, CVIU, SISAR, CUHK, RETARGETME, NRID, PIPAL")
      ->required();
  adapt->add_option("root", root, "Dataset root directory")->required()->check(CLI::ExistingDirectory);
  adapt->add_option("out", out_manifest, "Manifest to write")->required();

  std::string images_dir, grid, bench_csv, bench_json;
  auto* bench = app.add_subcommand("bench", "Geometric robustness bench over a directory of images");
  bench->add_option("images", images_dir, "Directory of images")->required();
  bench->add_option("--grid", grid, "e.g. 'rotate=0:10:2;translate=0:10:5;scale=0.5;shear=0.1'")->required();
  bench->add_option("--out", bench_csv, "CSV output (image,transform,param,score)")->required();
  bench->add_option("--json", bench_json, "Optional JSON output");
  AddScoringOptions(bench, cfg);

  std::string saved_report;
  auto* export_report = app.add_subcommand("export-report", "Re-emit a saved JSON report");
  export_report->add_option("report", saved_report, "Report JSON written by eval --report")->required();
  export_report->add_option("--output", cfg.output, "json, csv or plain")
      ->check(CLI::IsMember({"json", "csv", "plain"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  dsim_set_warning_handler(&WarningToStderr, nullptr);

  try {
    if (*score) {
      auto scorer = MakeScorer(cfg);
      double value = 0.0;
      Check(dsim_score_files(scorer.get(), ref_path.c_str(), test_path.c_str(), &value), "scoring");
      if (cfg.output == "json") {
        std::printf("{\"reference\": \"%s\", \"test\": \"%s\", \"score\": %.6f}\n", ref_path.c_str(),
                    test_path.c_str(), value);
      } else if (cfg.output == "csv") {
        std::printf("reference,test,score\n%s,%s,%.6f\n", ref_path.c_str(), test_path.c_str(), value);
      } else {
        std::printf("%.6f\n", value);
      }
    } else if (*eval) {
      auto scorer = MakeScorer(cfg);
      if (scores_csv.empty()) scores_csv = manifest + ".scores.csv";
      dsim_eval_options options;
      dsim_eval_options_default(&options);
      options.threads = cfg.threads;
      options.sample_size = sample;
      options.seed = cfg.seed;
      options.scores_csv = scores_csv.c_str();
      dsim_report* report = nullptr;
      Check(dsim_evaluate_manifest(scorer.get(), manifest.c_str(), &options, &report), "evaluating " + manifest);
      Owned<dsim_report> owned(report);
      PrintReport(report, cfg.output, report_json);
    } else if (*adapt) {
      std::size_t rows = 0, groups = 0;
      Check(dsim_adapt_dataset(kind.c_str(), root.c_str(), out_manifest.c_str(), &rows, &groups),
            "adapting " + kind);
      std::printf("wrote %s: %zu rows in %zu groups\n", out_manifest.c_str(), rows, groups);
    } else if (*bench) {
      auto scorer = MakeScorer(cfg);
      std::size_t rows = 0, skipped = 0;
      Check(dsim_bench(scorer.get(), images_dir.c_str(), grid.c_str(), bench_csv.c_str(),
                       bench_json.empty() ? nullptr : bench_json.c_str(), &rows, &skipped),
            "bench");
      std::printf("wrote %s: %zu rows, %zu skipped\n", bench_csv.c_str(), rows, skipped);
    } else if (*export_report) {
      dsim_report* report = nullptr;
      Check(dsim_report_load_json(saved_report.c_str(), &report), "loading " + saved_report);
      Owned<dsim_report> owned(report);
      PrintReport(report, cfg.output, "");
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "deepssim: %s\n", f.message.c_str());
    return f.code;
  }
  return kExitOk;
}
