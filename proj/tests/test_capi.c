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

/* Exercises the shared library from plain C. argv[1] is a scratch directory. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "w2w/w2w.h"

static int failures = 0;

#define EXPECT(cond)                                                       \
  do {                                                                     \
    if (!(cond)) {                                                         \
      fprintf(stderr, "%s:%d: expected %s (last error: %s)\n", __FILE__,   \
              __LINE__, #cond, w2w_last_error());                          \
      ++failures;                                                          \
    }                                                                      \
  } while (0)

static char scratch[4096];

static const char* path_of(const char* name) {
  static char buf[8][4200];
  static int next = 0;
  char* out = buf[next++ % 8];
  snprintf(out, sizeof buf[0], "%s/%s", scratch, name);
  return out;
}

static int warnings = 0;

static void on_log(w2w_log_level level, const char* message, void* user) {
  (void)message;
  if (level == W2W_LOG_WARNING) ++*(int*)user;
}

static void write_text(const char* path, const char* text) {
  FILE* f = fopen(path, "wb");
  fputs(text, f);
  fclose(f);
}

static int files_equal(const char* a, const char* b) {
  FILE* fa = fopen(a, "rb");
  FILE* fb = fopen(b, "rb");
  int same = fa && fb;
  while (same) {
    int ca = fgetc(fa), cb = fgetc(fb);
    if (ca != cb) same = 0;
    if (ca == EOF || cb == EOF) break;
  }
  if (fa) fclose(fa);
  if (fb) fclose(fb);
  return same;
}

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: test_capi <scratch-dir>\n");
    return 2;
  }
  snprintf(scratch, sizeof scratch, "%s", argv[1]);
  w2w_set_log_callback(on_log, &warnings);

  EXPECT(strlen(w2w_version()) > 0);
  EXPECT(strcmp(w2w_status_name(W2W_ERR_MISMATCH), "mismatch") == 0);
  EXPECT(strcmp(w2w_status_name(W2W_OK), "ok") == 0);

  /* configuration */
  w2w_config* config = NULL;
  EXPECT(w2w_config_new(&config) == W2W_OK);
  EXPECT(w2w_config_set(config, "cutoff", "2") == W2W_OK);
  EXPECT(w2w_config_set(config, "threads", "2") == W2W_OK);
  EXPECT(w2w_config_set(config, "cutoff", "-1") == W2W_ERR_ARGUMENT);
  EXPECT(strlen(w2w_last_error()) > 0);
  EXPECT(w2w_config_set(config, "no_such_key", "1") != W2W_OK);
  char* described = NULL;
  EXPECT(w2w_config_describe(config, &described) == W2W_OK);
  EXPECT(described && strstr(described, "cutoff = 2") != NULL);
  w2w_string_free(described);

  /* synthetic corpus */
  w2w_synth_spec spec;
  w2w_synth_spec_default(&spec);
  spec.entries = 60;
  spec.segments = 600;
  spec.noise = 0.0;
  const char* prefix = path_of("syn");
  EXPECT(w2w_synth(&spec, 4, prefix) == W2W_OK);
  spec.entries = 3;
  EXPECT(w2w_synth(&spec, 4, path_of("bad")) == W2W_ERR_ARGUMENT);

  EXPECT(w2w_config_set(config, "fw_source", path_of("syn.fw.src")) == W2W_OK);
  EXPECT(w2w_config_set(config, "fw_target", path_of("syn.fw.tgt")) == W2W_OK);

  /* bitext */
  w2w_bitext* bitext = NULL;
  EXPECT(w2w_bitext_load(config, path_of("syn.src"), path_of("syn.tgt"), &bitext) ==
         W2W_OK);
  EXPECT(bitext && w2w_bitext_segments(bitext) == 600);
  EXPECT(w2w_bitext_dropped(bitext) == 0);
  w2w_bitext* missing = NULL;
  EXPECT(w2w_bitext_load(config, path_of("nope.src"), path_of("syn.tgt"), &missing) ==
         W2W_ERR_IO);
  EXPECT(missing == NULL);
  write_text(path_of("short.src"), "a b\n");
  EXPECT(w2w_bitext_load(config, path_of("short.src"), path_of("syn.tgt"), &missing) ==
         W2W_ERR_MISMATCH);

  /* induction, twice for determinism */
  w2w_model* model = NULL;
  EXPECT(w2w_induce(bitext, config, path_of("trace.txt"), &model) == W2W_OK);
  EXPECT(model != NULL);
  EXPECT(w2w_model_entries(model) >= 50);
  EXPECT(w2w_model_iterations(model) >= 1);
  EXPECT(w2w_model_cutoff(model) == 2.0);
  w2w_class_params params;
  EXPECT(w2w_model_params(model, W2W_CLASS_CONTENT, &params) == W2W_OK);
  EXPECT(params.lambda_plus > params.lambda_minus);
  EXPECT(fabs(params.tau - (params.lambda - params.lambda_minus) /
                               (params.lambda_plus - params.lambda_minus)) < 1e-9 ||
         params.capped);
  char* summary = NULL;
  EXPECT(w2w_model_summary(model, &summary) == W2W_OK);
  EXPECT(summary && strlen(summary) > 0);
  w2w_string_free(summary);

  EXPECT(w2w_model_save(model, path_of("m1.json")) == W2W_OK);
  w2w_model* again = NULL;
  EXPECT(w2w_induce(bitext, config, NULL, &again) == W2W_OK);
  EXPECT(w2w_model_save(again, path_of("m2.json")) == W2W_OK);
  EXPECT(files_equal(path_of("m1.json"), path_of("m2.json")));
  w2w_model_free(again);

  w2w_model* loaded = NULL;
  EXPECT(w2w_model_load(path_of("m1.json"), &loaded) == W2W_OK);
  EXPECT(w2w_model_entries(loaded) == w2w_model_entries(model));
  EXPECT(w2w_model_save(loaded, path_of("m3.json")) == W2W_OK);
  EXPECT(files_equal(path_of("m1.json"), path_of("m3.json")));
  w2w_config* model_config = NULL;
  EXPECT(w2w_model_config(loaded, &model_config) == W2W_OK);
  w2w_config_free(model_config);
  w2w_model_free(loaded);
  EXPECT(w2w_model_load(path_of("syn.src"), &loaded) == W2W_ERR_FORMAT);

  EXPECT(w2w_link_write(model, bitext, 2, path_of("links.tsv")) == W2W_OK);

  /* lexicon */
  w2w_lexicon* lexicon = NULL;
  warnings = 0;
  EXPECT(w2w_lexicon_export(model, 1.0, &lexicon) == W2W_OK);
  EXPECT(warnings == 1);
  EXPECT(w2w_lexicon_size(lexicon) == w2w_model_entries(model));
  double recall = 0.0;
  EXPECT(w2w_lexicon_recall(lexicon, bitext, &recall) == W2W_OK);
  EXPECT(recall > 0.9 && recall <= 1.0);
  EXPECT(w2w_lexicon_save(lexicon, path_of("lex.tsv")) == W2W_OK);
  w2w_lexicon* reread = NULL;
  EXPECT(w2w_lexicon_load(path_of("lex.tsv"), &reread) == W2W_OK);
  EXPECT(w2w_lexicon_size(reread) == w2w_lexicon_size(lexicon));
  w2w_lexicon_free(reread);
  EXPECT(w2w_lexicon_export_top(model, 7, &reread) == W2W_OK);
  EXPECT(w2w_lexicon_size(reread) == 7);
  w2w_lexicon_free(reread);

  /* evaluation */
  EXPECT(w2w_eval_sample(lexicon, bitext, 2, 10, 1, 3, path_of("bundle.json")) ==
         W2W_OK);
  EXPECT(w2w_eval_sample(lexicon, bitext, 1, 100000, 1, 3, path_of("x.json")) ==
         W2W_ERR_ARGUMENT);
  write_text(path_of("judgments.json"),
             "{\"format\": \"w2w-judgments\", \"version\": 1, "
             "\"bundle_id\": \"nope\", \"judge\": \"c\", \"judgments\": []}");
  char* report = NULL;
  EXPECT(w2w_eval_score(path_of("bundle.json"), path_of("judgments.json"), &report) ==
         W2W_ERR_SCHEMA);
  EXPECT(report == NULL);
  EXPECT(w2w_eval_curve(model, path_of("syn.truth.tsv"), bitext, NULL, 0, 10,
                        path_of("curve.csv")) == W2W_OK);
  const double grid[] = {2.0, 10.0, 1e6};
  EXPECT(w2w_eval_curve(model, path_of("syn.truth.tsv"), NULL, grid, 3, 0,
                        path_of("curve3.csv")) == W2W_OK);

  w2w_lexicon_free(lexicon);
  w2w_model_free(model);
  w2w_bitext_free(bitext);
  w2w_config_free(config);
  /* Releasing NULL is a no-op. */
  w2w_lexicon_free(NULL);
  w2w_model_free(NULL);
  w2w_bitext_free(NULL);
  w2w_config_free(NULL);
  w2w_string_free(NULL);
  w2w_set_log_callback(NULL, NULL);

  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
