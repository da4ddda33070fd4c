/*
  Copyright (c) The w2w Authors.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

/* C interface to the w2w lexicon induction library.
 *
 * Objects are opaque handles released by their _free function. Every
 * fallible call returns a w2w_status; on failure w2w_last_error() holds a
 * one-line message for the calling thread. Strings returned through char**
 * are owned by the caller and released with w2w_string_free().
 */

#ifndef W2W_H
#define W2W_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(W2W_BUILDING_LIBRARY)
#    define W2W_API __declspec(dllexport)
#  else
#    define W2W_API __declspec(dllimport)
#  endif
#else
#  define W2W_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum w2w_status {
  W2W_OK = 0,
  W2W_ERR_IO,
  W2W_ERR_FORMAT,
  W2W_ERR_ENCODING,
  W2W_ERR_MISMATCH,
  W2W_ERR_VERSION,
  W2W_ERR_SCHEMA,
  W2W_ERR_ARGUMENT,
  W2W_ERR_PRECONDITION,
  W2W_ERR_DEGENERATE,
  W2W_ERR_INDUCTION,
  W2W_ERR_INTERNAL
} w2w_status;

typedef enum w2w_class { W2W_CLASS_CONTENT = 0, W2W_CLASS_FUNCTION = 1 } w2w_class;

typedef enum w2w_log_level { W2W_LOG_INFO = 0, W2W_LOG_WARNING = 1 } w2w_log_level;

typedef struct w2w_config w2w_config;
typedef struct w2w_bitext w2w_bitext;
typedef struct w2w_model w2w_model;
typedef struct w2w_lexicon w2w_lexicon;

W2W_API const char* w2w_version(void);

/* Message of the last failed call on this thread; "" when none. */
W2W_API const char* w2w_last_error(void);

/* Short stable tag for a status, e.g. "mismatch". */
W2W_API const char* w2w_status_name(w2w_status status);

W2W_API void w2w_string_free(char* s);

/* Diagnostics go to stderr unless a callback is installed. Passing NULL
 * restores stderr; w2w_set_log_quiet(1) drops info lines. */
typedef void (*w2w_log_fn)(w2w_log_level level, const char* message, void* user);
W2W_API void w2w_set_log_callback(w2w_log_fn fn, void* user);
W2W_API void w2w_set_log_quiet(int quiet);

/* ---- configuration ---------------------------------------------------- */

W2W_API w2w_status w2w_config_new(w2w_config** out);
W2W_API void w2w_config_free(w2w_config* config);
W2W_API w2w_status w2w_config_set(w2w_config* config, const char* key,
                                  const char* value);
/* key = value lines, '#' comments. */
W2W_API w2w_status w2w_config_load(w2w_config* config, const char* path);
/* Every key with its resolved value, one "key = value" line each. */
W2W_API w2w_status w2w_config_describe(const w2w_config* config, char** out);

/* ---- bitext ----------------------------------------------------------- */

/* Tokenizer options and function-word lists are taken from the config. */
W2W_API w2w_status w2w_bitext_load(const w2w_config* config,
                                   const char* source_path,
                                   const char* target_path, w2w_bitext** out);
W2W_API void w2w_bitext_free(w2w_bitext* bitext);
W2W_API size_t w2w_bitext_segments(const w2w_bitext* bitext);
W2W_API size_t w2w_bitext_dropped(const w2w_bitext* bitext);

/* ---- induction and models --------------------------------------------- */

typedef struct w2w_class_params {
  double lambda_plus;
  double lambda_minus;
  double lambda;
  double tau;
  double log_likelihood;
  int capped;
} w2w_class_params;

/* trace_path may be NULL; otherwise every parameter point evaluated by the
 * search is written there as "class iter lambda_plus lambda_minus loglik". */
W2W_API w2w_status w2w_induce(const w2w_bitext* bitext,
                              const w2w_config* config, const char* trace_path,
                              w2w_model** out);
W2W_API void w2w_model_free(w2w_model* model);
W2W_API w2w_status w2w_model_save(const w2w_model* model, const char* path);
W2W_API w2w_status w2w_model_load(const char* path, w2w_model** out);
/* Copy of the configuration the model was induced with. */
W2W_API w2w_status w2w_model_config(const w2w_model* model, w2w_config** out);
W2W_API size_t w2w_model_entries(const w2w_model* model);
W2W_API size_t w2w_model_iterations(const w2w_model* model);
W2W_API int w2w_model_non_monotonic(const w2w_model* model);
W2W_API double w2w_model_cutoff(const w2w_model* model);
/* W2W_ERR_ARGUMENT when the class was never estimated. */
W2W_API w2w_status w2w_model_params(const w2w_model* model, w2w_class cls,
                                    w2w_class_params* out);
/* Per-iteration table and final parameters, human readable. */
W2W_API w2w_status w2w_model_summary(const w2w_model* model, char** out);

/* Competitive linking of a bitext under a model's scores; writes the
 * token-link TSV. */
W2W_API w2w_status w2w_link_write(const w2w_model* model,
                                  const w2w_bitext* bitext, unsigned threads,
                                  const char* path);

/* ---- lexicons ---------------------------------------------------------- */

W2W_API w2w_status w2w_lexicon_export(const w2w_model* model, double threshold,
                                      w2w_lexicon** out);
/* The `count` highest-scoring entries; the lexicon threshold is unknown. */
W2W_API w2w_status w2w_lexicon_export_top(const w2w_model* model, size_t count,
                                          w2w_lexicon** out);
W2W_API void w2w_lexicon_free(w2w_lexicon* lexicon);
W2W_API w2w_status w2w_lexicon_save(const w2w_lexicon* lexicon,
                                    const char* path);
W2W_API w2w_status w2w_lexicon_load(const char* path, w2w_lexicon** out);
W2W_API size_t w2w_lexicon_size(const w2w_lexicon* lexicon);
W2W_API w2w_status w2w_lexicon_recall(const w2w_lexicon* lexicon,
                                      const w2w_bitext* bitext, double* out);

/* ---- evaluation --------------------------------------------------------- */

/* Writes an adjudication bundle of `sets` samples of `size` link types. */
W2W_API w2w_status w2w_eval_sample(const w2w_lexicon* lexicon,
                                   const w2w_bitext* bitext, size_t sets,
                                   size_t size, uint64_t seed,
                                   size_t max_contexts, const char* path);

/* Scores a judgment set against its bundle; `report` receives the text
 * report. */
W2W_API w2w_status w2w_eval_score(const char* bundle_path,
                                  const char* judgments_path, char** report);

/* Precision/recall CSV against a generator truth file. `bitext` may be NULL,
 * in which case recall counts every truth pair. With count == 0, `points`
 * thresholds are spaced geometrically from the model cutoff to the largest
 * likelihood ratio in the model. */
W2W_API w2w_status w2w_eval_curve(const w2w_model* model,
                                  const char* truth_path,
                                  const w2w_bitext* bitext,
                                  const double* thresholds, size_t count,
                                  size_t points, const char* path);

typedef enum w2w_noise_source {
  W2W_NOISE_UNIFORM = 0,
  W2W_NOISE_UNIGRAM = 1
} w2w_noise_source;

typedef struct w2w_synth_spec {
  size_t entries;
  size_t segments;
  size_t min_length;
  size_t max_length;
  double zipf_exponent;
  double noise;
  w2w_noise_source noise_source;
  double function_fraction;
  size_t collocations;
} w2w_synth_spec;

W2W_API void w2w_synth_spec_default(w2w_synth_spec* spec);

/* Writes <prefix>.src, .tgt, .fw.src, .fw.tgt and .truth.tsv. */
W2W_API w2w_status w2w_synth(const w2w_synth_spec* spec, uint64_t seed,
                             const char* prefix);

#ifdef __cplusplus
}
#endif

#endif /* W2W_H */
