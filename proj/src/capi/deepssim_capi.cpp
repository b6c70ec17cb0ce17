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

#include "deepssim/deepssim.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include <opencv2/imgcodecs.hpp>

#include "core/adapters.hpp"
#include "core/backbone.hpp"
#include "core/error.hpp"
#include "core/evaluate.hpp"
#include "core/gramsim.hpp"
#include "core/image.hpp"
#include "core/manifest.hpp"
#include "core/robustness.hpp"
#include "core/weights.hpp"

namespace fs = std::filesystem;

struct dsim_weights {
  std::shared_ptr<const deepssim::WeightContainer> container;
};

struct dsim_image {
  deepssim::Image image;
};

struct dsim_scorer {
  std::unique_ptr<deepssim::DeepSsim> scorer;
};

struct dsim_report {
  deepssim::EvalReport report;
};

namespace {

thread_local std::string g_last_error;

dsim_status StatusOf(deepssim::ErrorKind kind) {
  using deepssim::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument: return DSIM_ERR_INVALID_ARGUMENT;
    case ErrorKind::kIo: return DSIM_ERR_IO;
    case ErrorKind::kFormat: return DSIM_ERR_FORMAT;
    case ErrorKind::kValidation: return DSIM_ERR_VALIDATION;
    case ErrorKind::kDegenerate: return DSIM_ERR_DEGENERATE;
  }
  return DSIM_ERR_INTERNAL;
}

template <typename Fn>
dsim_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DSIM_OK;
  } catch (const deepssim::Error& e) {
    g_last_error = e.what();
    return StatusOf(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DSIM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DSIM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DSIM_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) deepssim::Fail(deepssim::ErrorKind::kInvalidArgument, what);
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

deepssim::SimilarityConfig ToConfig(const dsim_config& c) {
  deepssim::SimilarityConfig cfg;
  cfg.variant = c.variant == DSIM_VARIANT_LITE ? deepssim::Variant::kLite : deepssim::Variant::kStandard;
  cfg.window = c.window;
  cfg.stride = c.stride;
  cfg.xi = c.xi;
  cfg.normalize_gram = c.normalize_gram != 0;
  cfg.backbone.relu_at_output = c.pre_relu == 0;
  return cfg;
}

void WriteText(const char* path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) deepssim::Fail(deepssim::ErrorKind::kIo, std::string("cannot write ") + path);
  out << text;
  if (!out) deepssim::Fail(deepssim::ErrorKind::kIo, std::string("short write to ") + path);
}

struct WarningTarget {
  dsim_warning_fn fn;
  void* user;
};
WarningTarget g_warning_target{nullptr, nullptr};

void ForwardWarning(const std::string& message, void* user) {
  auto* target = static_cast<WarningTarget*>(user);
  target->fn(message.c_str(), target->user);
}

}  // namespace

extern "C" {

DSIM_API const char* dsim_version(void) { return "1.0.0"; }

DSIM_API const char* dsim_last_error(void) { return g_last_error.c_str(); }

DSIM_API const char* dsim_status_name(dsim_status status) {
  switch (status) {
    case DSIM_OK: return "ok";
    case DSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DSIM_ERR_IO: return "i/o error";
    case DSIM_ERR_FORMAT: return "format error";
    case DSIM_ERR_VALIDATION: return "validation error";
    case DSIM_ERR_DEGENERATE: return "degenerate input";
    case DSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

DSIM_API void dsim_set_warning_handler(dsim_warning_fn fn, void* user) {
  if (fn == nullptr) {
    deepssim::SetWarningSink(nullptr, nullptr);
    return;
  }
  g_warning_target = {fn, user};
  deepssim::SetWarningSink(&ForwardWarning, &g_warning_target);
}

DSIM_API void dsim_string_free(char* s) { std::free(s); }

DSIM_API dsim_status dsim_weights_load(const char* path, dsim_weights** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto w = std::make_unique<dsim_weights>();
    w->container = std::make_shared<const deepssim::WeightContainer>(deepssim::LoadWeights(path));
    *out = w.release();
  });
}

DSIM_API dsim_status dsim_weights_synthesize(uint64_t seed, dsim_weights** out) {
  return Guard([&] {
    Require(out != nullptr, "null argument");
    *out = nullptr;
    auto w = std::make_unique<dsim_weights>();
    w->container = std::make_shared<const deepssim::WeightContainer>(deepssim::SynthesizeWeights(seed));
    *out = w.release();
  });
}

DSIM_API dsim_status dsim_weights_save(const dsim_weights* weights, const char* path) {
  return Guard([&] {
    Require(weights != nullptr && path != nullptr, "null argument");
    deepssim::SaveWeights(*weights->container, path);
  });
}

DSIM_API dsim_status dsim_weights_layer_count(const dsim_weights* weights, size_t* out) {
  return Guard([&] {
    Require(weights != nullptr && out != nullptr, "null argument");
    *out = weights->container->layers.size();
  });
}

DSIM_API dsim_status dsim_weights_check_test_vector(const dsim_weights* weights, double* max_abs_diff) {
  return Guard([&] {
    Require(weights != nullptr && max_abs_diff != nullptr, "null argument");
    *max_abs_diff = deepssim::TestVectorMaxAbsDiff(*weights->container);
  });
}

DSIM_API void dsim_weights_free(dsim_weights* weights) { delete weights; }

DSIM_API dsim_status dsim_image_load(const char* path, dsim_image** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto img = std::make_unique<dsim_image>();
    img->image = deepssim::LoadImage(path);
    *out = img.release();
  });
}

DSIM_API dsim_status dsim_image_from_rgb(const float* pixels, int height, int width, dsim_image** out) {
  return Guard([&] {
    Require(pixels != nullptr && out != nullptr, "null argument");
    Require(height > 0 && width > 0, "image dimensions must be positive");
    *out = nullptr;
    auto img = std::make_unique<dsim_image>();
    img->image = deepssim::Image(height, width);
    std::memcpy(img->image.pixels.data(), pixels, img->image.pixels.size() * sizeof(float));
    deepssim::ValidateImage(img->image);
    *out = img.release();
  });
}

DSIM_API int dsim_image_width(const dsim_image* image) { return image ? image->image.width : 0; }
DSIM_API int dsim_image_height(const dsim_image* image) { return image ? image->image.height : 0; }
DSIM_API void dsim_image_free(dsim_image* image) { delete image; }

DSIM_API void dsim_config_default(dsim_config* config) {
  if (config == nullptr) return;
  const deepssim::SimilarityConfig d;
  config->variant = DSIM_VARIANT_STANDARD;
  config->window = d.window;
  config->stride = d.stride;
  config->xi = d.xi;
  config->normalize_gram = d.normalize_gram ? 1 : 0;
  config->pre_relu = 0;
}

DSIM_API dsim_status dsim_scorer_create(const dsim_weights* weights, const dsim_config* config,
                                        dsim_scorer** out) {
  return Guard([&] {
    Require(weights != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    dsim_config c;
    dsim_config_default(&c);
    if (config != nullptr) c = *config;
    auto s = std::make_unique<dsim_scorer>();
    s->scorer = std::make_unique<deepssim::DeepSsim>(weights->container, ToConfig(c));
    *out = s.release();
  });
}

DSIM_API void dsim_scorer_free(dsim_scorer* scorer) { delete scorer; }

DSIM_API dsim_status dsim_score(const dsim_scorer* scorer, const dsim_image* reference,
                                const dsim_image* test, double* out) {
  return Guard([&] {
    Require(scorer != nullptr && reference != nullptr && test != nullptr && out != nullptr, "null argument");
    *out = scorer->scorer->Score(reference->image, test->image);
  });
}

DSIM_API dsim_status dsim_score_files(const dsim_scorer* scorer, const char* reference_path,
                                      const char* test_path, double* out) {
  return Guard([&] {
    Require(scorer != nullptr && reference_path != nullptr && test_path != nullptr && out != nullptr,
            "null argument");
    *out = scorer->scorer->Score(deepssim::LoadImage(reference_path), deepssim::LoadImage(test_path));
  });
}

DSIM_API void dsim_eval_options_default(dsim_eval_options* options) {
  if (options == nullptr) return;
  options->threads = 1;
  options->sample_size = 0;
  options->seed = 0;
  options->scores_csv = nullptr;
}

DSIM_API dsim_status dsim_evaluate_manifest(const dsim_scorer* scorer, const char* manifest_path,
                                            const dsim_eval_options* options, dsim_report** out) {
  return Guard([&] {
    Require(scorer != nullptr && manifest_path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    dsim_eval_options opts;
    dsim_eval_options_default(&opts);
    if (options != nullptr) opts = *options;
    Require(opts.threads >= 1, "threads must be >= 1");

    const deepssim::Manifest manifest = deepssim::LoadManifest(manifest_path);
    std::vector<deepssim::EvalRecord> records = deepssim::VotesToRecords(manifest);
    if (opts.sample_size > 0) records = deepssim::Subsample(records, opts.sample_size, opts.seed);

    std::ofstream sidecar;
    deepssim::EvalOptions eval;
    eval.threads = opts.threads;
    eval.votes = manifest.kind == deepssim::ManifestKind::kVotes;
    if (opts.scores_csv != nullptr) {
      sidecar.open(opts.scores_csv, std::ios::trunc);
      if (!sidecar) deepssim::Fail(deepssim::ErrorKind::kIo, std::string("cannot write ") + opts.scores_csv);
      sidecar << "index,ref_path,test_path,subjective,score\n";
      eval.on_score = [&sidecar](std::size_t i, const deepssim::EvalRecord& r, double score) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g,%.9f", r.subjective, score);
        sidecar << i << ',' << deepssim::CsvField(r.ref_path.string()) << ','
                << deepssim::CsvField(r.test_path.string()) << ',' << buf << '\n';
        sidecar.flush();
      };
    }

    auto report = std::make_unique<dsim_report>();
    report->report = deepssim::EvaluateDeepSsim(*scorer->scorer, records, eval);
    report->report.skipped = manifest.skipped;
    *out = report.release();
  });
}

DSIM_API dsim_status dsim_report_load_json(const char* path, dsim_report** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    std::ifstream in(path);
    if (!in) deepssim::Fail(deepssim::ErrorKind::kIo, std::string("cannot read report ") + path);
    std::stringstream text;
    text << in.rdbuf();
    auto report = std::make_unique<dsim_report>();
    report->report = deepssim::ReportFromJson(text.str());
    *out = report.release();
  });
}

DSIM_API dsim_status dsim_report_summary_get(const dsim_report* report, dsim_report_summary* out) {
  return Guard([&] {
    Require(report != nullptr && out != nullptr, "null argument");
    const deepssim::EvalReport& r = report->report;
    *out = dsim_report_summary{};
    out->n = r.n;
    out->skipped = r.skipped;
    out->votes = r.votes ? 1 : 0;
    out->has_plcc = r.plcc_raw.has_value() ? 1 : 0;
    out->plcc_raw = r.plcc_raw.value_or(0.0);
    out->plcc_fitted = r.plcc_fitted.value_or(0.0);
    out->logistic_converged = r.logistic_converged ? 1 : 0;
    out->has_srcc = r.srcc.has_value() ? 1 : 0;
    out->srcc = r.srcc.value_or(0.0);
    out->n_groups = r.per_group_krcc.size();
    out->krcc_mean = r.krcc_mean;
    out->krcc_std = r.krcc_std;
    out->runtime_s = r.runtime_s;
  });
}

DSIM_API dsim_status dsim_report_format(const dsim_report* report, const char* format, char** out) {
  return Guard([&] {
    Require(report != nullptr && format != nullptr && out != nullptr, "null argument");
    const std::string f(format);
    std::string text;
    if (f == "json") {
      text = deepssim::ReportToJson(report->report) + "\n";
    } else if (f == "csv") {
      text = deepssim::ReportCsvHeader() + "\n" + deepssim::ReportCsvRow(report->report) + "\n";
    } else if (f == "plain") {
      text = deepssim::ReportPlain(report->report);
    } else {
      deepssim::Fail(deepssim::ErrorKind::kInvalidArgument, "unknown report format '" + f + "'");
    }
    *out = CopyString(text);
  });
}

DSIM_API void dsim_report_free(dsim_report* report) { delete report; }

DSIM_API dsim_status dsim_adapt_dataset(const char* kind, const char* root, const char* out_manifest,
                                        size_t* rows, size_t* groups) {
  return Guard([&] {
    Require(kind != nullptr && root != nullptr && out_manifest != nullptr, "null argument");
    const auto parsed = deepssim::ParseDatasetKind(kind);
    if (!parsed) deepssim::Fail(deepssim::ErrorKind::kInvalidArgument, std::string("unknown dataset '") + kind + "'");
    const auto result = deepssim::AdaptDataset(*parsed, root, out_manifest);
    if (rows != nullptr) *rows = result.rows;
    if (groups != nullptr) *groups = result.groups;
  });
}

DSIM_API dsim_status dsim_bench(const dsim_scorer* scorer, const char* images_dir, const char* grid,
                                const char* csv_path, const char* json_path, size_t* rows,
                                size_t* skipped) {
  return Guard([&] {
    Require(scorer != nullptr && images_dir != nullptr && grid != nullptr && csv_path != nullptr,
            "null argument");
    const auto transforms = deepssim::ParseGrid(grid);
    std::error_code ec;
    if (!fs::is_directory(images_dir, ec)) {
      deepssim::Fail(deepssim::ErrorKind::kIo, std::string("not a directory: ") + images_dir);
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(images_dir)) {
      if (e.is_regular_file() && cv::haveImageReader(e.path().string())) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<deepssim::NamedImage> images;
    for (const auto& f : files) images.push_back({f.filename().string(), deepssim::LoadImage(f)});
    const auto result = deepssim::RobustnessBench(images, *scorer->scorer, transforms, true);
    for (const auto& msg : result.skipped) deepssim::Warn("skipped " + msg);

    WriteText(csv_path, deepssim::BenchCsv(result.cases));
    if (json_path != nullptr) WriteText(json_path, deepssim::BenchJson(result.cases) + "\n");
    if (rows != nullptr) *rows = result.cases.size();
    if (skipped != nullptr) *skipped = result.skipped.size();
  });
}

}  // extern "C"
