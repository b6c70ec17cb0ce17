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

/* C interface to the DeepSSIM full-reference image quality library.
 *
 * Every function returns a dsim_status. On failure a description of the most
 * recent error on the calling thread is available from dsim_last_error().
 * Handles are opaque; each *_create / *_load has a matching *_free that
 * accepts NULL. Weight and scorer handles are immutable once created and may
 * be shared across threads.
 */

#ifndef DEEPSSIM_DEEPSSIM_H_
#define DEEPSSIM_DEEPSSIM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DEEPSSIM_BUILDING)
#    define DSIM_API __declspec(dllexport)
#  else
#    define DSIM_API __declspec(dllimport)
#  endif
#else
#  define DSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsim_status {
  DSIM_OK = 0,
  DSIM_ERR_INVALID_ARGUMENT = 1, /* bad parameter or configuration */
  DSIM_ERR_IO = 2,               /* missing or unreadable/unwritable file */
  DSIM_ERR_FORMAT = 3,           /* malformed container, image, manifest or report */
  DSIM_ERR_VALIDATION = 4,       /* well-formed input that violates a constraint */
  DSIM_ERR_DEGENERATE = 5,       /* zero-variance data, no records, non-finite score */
  DSIM_ERR_INTERNAL = 6
} dsim_status;

typedef enum dsim_variant { DSIM_VARIANT_STANDARD = 0, DSIM_VARIANT_LITE = 1 } dsim_variant;

typedef struct dsim_weights dsim_weights;
typedef struct dsim_image dsim_image;
typedef struct dsim_scorer dsim_scorer;
typedef struct dsim_report dsim_report;

typedef struct dsim_config {
  dsim_variant variant;
  int window;          /* window side over the Gram grid (default 4) */
  int stride;          /* window step (default 4: non-overlapping) */
  double xi;           /* stabilizer (default 1e-8) */
  int normalize_gram;  /* divide the Gram matrix by the spatial size (default 1) */
  int pre_relu;        /* take conv5_1 before its ReLU (default 0) */
} dsim_config;

typedef struct dsim_eval_options {
  int threads;            /* >= 1 */
  size_t sample_size;     /* 0: all records; else seeded subsample */
  uint64_t seed;
  const char* scores_csv; /* optional sidecar: index,ref_path,test_path,subjective,score */
} dsim_eval_options;

/* Numeric view of a report. has_* flags are 0 where a field does not apply
 * (PLCC/SRCC on vote data). */
typedef struct dsim_report_summary {
  size_t n;
  size_t skipped;
  int votes;
  int has_plcc;
  double plcc_raw;
  double plcc_fitted;
  int logistic_converged;
  int has_srcc;
  double srcc;
  size_t n_groups;
  double krcc_mean;
  double krcc_std;
  double runtime_s;
} dsim_report_summary;

typedef void (*dsim_warning_fn)(const char* message, void* user);

DSIM_API const char* dsim_version(void);
DSIM_API const char* dsim_last_error(void);
DSIM_API const char* dsim_status_name(dsim_status status);

/* Routes warnings (skipped rows, skipped bench cases) to `fn`; NULL restores stderr. */
DSIM_API void dsim_set_warning_handler(dsim_warning_fn fn, void* user);

/* Strings returned through char** out-parameters are released with this. */
DSIM_API void dsim_string_free(char* s);

/* ---- weights ---------------------------------------------------------- */

DSIM_API dsim_status dsim_weights_load(const char* path, dsim_weights** out);
/* VGG16-shaped container with seeded He-normal kernels (tests, demos). */
DSIM_API dsim_status dsim_weights_synthesize(uint64_t seed, dsim_weights** out);
DSIM_API dsim_status dsim_weights_save(const dsim_weights* weights, const char* path);
DSIM_API dsim_status dsim_weights_layer_count(const dsim_weights* weights, size_t* out);
/* Max-abs deviation of the forward pass from the embedded test vector. */
DSIM_API dsim_status dsim_weights_check_test_vector(const dsim_weights* weights, double* max_abs_diff);
DSIM_API void dsim_weights_free(dsim_weights* weights);

/* ---- images ----------------------------------------------------------- */

DSIM_API dsim_status dsim_image_load(const char* path, dsim_image** out);
/* Copies an interleaved RGB [height][width][3] buffer with values in [0, 1]. */
DSIM_API dsim_status dsim_image_from_rgb(const float* pixels, int height, int width, dsim_image** out);
DSIM_API int dsim_image_width(const dsim_image* image);
DSIM_API int dsim_image_height(const dsim_image* image);
DSIM_API void dsim_image_free(dsim_image* image);

/* ---- scoring ---------------------------------------------------------- */

DSIM_API void dsim_config_default(dsim_config* config);
DSIM_API dsim_status dsim_scorer_create(const dsim_weights* weights, const dsim_config* config,
                                        dsim_scorer** out);
DSIM_API void dsim_scorer_free(dsim_scorer* scorer);

/* Images may differ in size; neither is resized. */
DSIM_API dsim_status dsim_score(const dsim_scorer* scorer, const dsim_image* reference,
                                const dsim_image* test, double* out);
DSIM_API dsim_status dsim_score_files(const dsim_scorer* scorer, const char* reference_path,
                                      const char* test_path, double* out);

/* ---- evaluation ------------------------------------------------------- */

DSIM_API void dsim_eval_options_default(dsim_eval_options* options);
DSIM_API dsim_status dsim_evaluate_manifest(const dsim_scorer* scorer, const char* manifest_path,
                                            const dsim_eval_options* options, dsim_report** out);
DSIM_API dsim_status dsim_report_load_json(const char* path, dsim_report** out);
DSIM_API dsim_status dsim_report_summary_get(const dsim_report* report, dsim_report_summary* out);
/* format: "json", "csv" (header line + row) or "plain". */
DSIM_API dsim_status dsim_report_format(const dsim_report* report, const char* format, char** out);
DSIM_API void dsim_report_free(dsim_report* report);

/* ---- datasets and robustness ----------------------------------------- */

/* kind: LIVE, CSIQ, TID2013, KADID10K, QADS, CVIU, SISAR, CUHK, RETARGETME,
 * NRID or PIPAL (case-insensitive, '-' and '_' ignored). */
DSIM_API dsim_status dsim_adapt_dataset(const char* kind, const char* root, const char* out_manifest,
                                        size_t* rows, size_t* groups);

/* Scores every image in `images_dir` against transformed copies of itself.
 * `grid` uses the syntax "rotate=0:10:2;translate=0:10:5;scale=0.5,2;shear=0.1".
 * Undersized images and transforms are skipped with a warning. Results are
 * written as CSV (image,transform,param,score) and, when json_path is set,
 * as JSON. */
DSIM_API dsim_status dsim_bench(const dsim_scorer* scorer, const char* images_dir, const char* grid,
                                const char* csv_path, const char* json_path, size_t* rows,
                                size_t* skipped);

#ifdef __cplusplus
}
#endif

#endif /* DEEPSSIM_DEEPSSIM_H_ */
