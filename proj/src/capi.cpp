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

#include "w2w/w2w.h"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "w2w/config.hpp"
#include "w2w/error.hpp"
#include "w2w/evalkit.hpp"
#include "w2w/induction.hpp"
#include "w2w/lexicon.hpp"
#include "w2w/linking.hpp"
#include "w2w/log.hpp"

struct w2w_config {
  w2w::InduceConfig value;
};
struct w2w_bitext {
  w2w::Bitext value;
};
struct w2w_model {
  w2w::Model value;
};
struct w2w_lexicon {
  w2w::Lexicon value;
};

namespace {

thread_local std::string last_error;

std::atomic<bool> quiet{false};
std::atomic<bool> custom_sink{false};

w2w_status to_status(w2w::ErrorCode code) {
  using w2w::ErrorCode;
  switch (code) {
    case ErrorCode::io: return W2W_ERR_IO;
    case ErrorCode::format: return W2W_ERR_FORMAT;
    case ErrorCode::encoding: return W2W_ERR_ENCODING;
    case ErrorCode::mismatch: return W2W_ERR_MISMATCH;
    case ErrorCode::version: return W2W_ERR_VERSION;
    case ErrorCode::schema: return W2W_ERR_SCHEMA;
    case ErrorCode::argument: return W2W_ERR_ARGUMENT;
    case ErrorCode::precondition: return W2W_ERR_PRECONDITION;
    case ErrorCode::degenerate: return W2W_ERR_DEGENERATE;
    case ErrorCode::induction: return W2W_ERR_INDUCTION;
  }
  return W2W_ERR_INTERNAL;
}

w2w_status failed(w2w_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
w2w_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return W2W_OK;
  } catch (const w2w::Error& e) {
    return failed(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return failed(W2W_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return failed(W2W_ERR_INTERNAL, e.what());
  }
}

#define W2W_REQUIRE(cond, what) \
  if (!(cond)) return failed(W2W_ERR_ARGUMENT, what)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) w2w::fail(w2w::ErrorCode::io, std::string("cannot open ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_output(const char* path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) w2w::fail(w2w::ErrorCode::io, std::string("cannot write ") + path);
  return out;
}

void write_params(std::ostream& out, const w2w::ClassParams& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "l+=%.6g l-=%.6g lambda=%.6g tau=%.6g%s",
                p.lambda_plus, p.lambda_minus, p.lambda, p.tau,
                p.capped ? " capped" : "");
  out << buf;
}

}  // namespace

extern "C" {

const char* w2w_version(void) { return "1.0.0"; }

const char* w2w_last_error(void) { return last_error.c_str(); }

const char* w2w_status_name(w2w_status status) {
  switch (status) {
    case W2W_OK: return "ok";
    case W2W_ERR_IO: return "io";
    case W2W_ERR_FORMAT: return "format";
    case W2W_ERR_ENCODING: return "encoding";
    case W2W_ERR_MISMATCH: return "mismatch";
    case W2W_ERR_VERSION: return "version";
    case W2W_ERR_SCHEMA: return "schema";
    case W2W_ERR_ARGUMENT: return "argument";
    case W2W_ERR_PRECONDITION: return "precondition";
    case W2W_ERR_DEGENERATE: return "degenerate";
    case W2W_ERR_INDUCTION: return "induction";
    case W2W_ERR_INTERNAL: return "internal";
  }
  return "internal";
}

void w2w_string_free(char* s) { std::free(s); }

void w2w_set_log_callback(w2w_log_fn fn, void* user) {
  custom_sink = fn != nullptr;
  if (!fn) {
    w2w::set_log_sink([](w2w::LogLevel level, const std::string& message) {
      if (level == w2w::LogLevel::info && quiet.load()) return;
      std::cerr << (level == w2w::LogLevel::warning ? "warning: " : "")
                << message << '\n';
    });
    return;
  }
  w2w::set_log_sink([fn, user](w2w::LogLevel level, const std::string& message) {
    if (level == w2w::LogLevel::info && quiet.load()) return;
    fn(level == w2w::LogLevel::warning ? W2W_LOG_WARNING : W2W_LOG_INFO,
       message.c_str(), user);
  });
}

void w2w_set_log_quiet(int q) {
  quiet = q != 0;
  if (!custom_sink) w2w_set_log_callback(nullptr, nullptr);
}

w2w_status w2w_config_new(w2w_config** out) {
  W2W_REQUIRE(out, "config_new: null output");
  return guarded([&] { *out = new w2w_config{}; });
}

void w2w_config_free(w2w_config* config) { delete config; }

w2w_status w2w_config_set(w2w_config* config, const char* key, const char* value) {
  W2W_REQUIRE(config && key && value, "config_set: null argument");
  return guarded([&] { w2w::set_config_value(config->value, key, value); });
}

w2w_status w2w_config_load(w2w_config* config, const char* path) {
  W2W_REQUIRE(config && path, "config_load: null argument");
  return guarded([&] { w2w::load_config_file(config->value, path); });
}

w2w_status w2w_config_describe(const w2w_config* config, char** out) {
  W2W_REQUIRE(config && out, "config_describe: null argument");
  return guarded([&] { *out = copy_string(w2w::describe_config(config->value)); });
}

w2w_status w2w_bitext_load(const w2w_config* config, const char* source_path,
                           const char* target_path, w2w_bitext** out) {
  W2W_REQUIRE(config && source_path && target_path && out,
              "bitext_load: null argument");
  return guarded([&] {
    *out = new w2w_bitext{
        w2w::load_configured_bitext(config->value, source_path, target_path)};
  });
}

void w2w_bitext_free(w2w_bitext* bitext) { delete bitext; }

size_t w2w_bitext_segments(const w2w_bitext* bitext) {
  return bitext ? bitext->value.segments().size() : 0;
}

size_t w2w_bitext_dropped(const w2w_bitext* bitext) {
  return bitext ? bitext->value.dropped_lines().size() : 0;
}

w2w_status w2w_induce(const w2w_bitext* bitext, const w2w_config* config,
                      const char* trace_path, w2w_model** out) {
  W2W_REQUIRE(bitext && config && out, "induce: null argument");
  return guarded([&] {
    std::ofstream trace;
    if (trace_path) trace = open_output(trace_path);
    *out = new w2w_model{w2w::induce(bitext->value, config->value, {},
                                     trace_path ? &trace : nullptr)};
    if (trace_path && !trace.flush())
      w2w::fail(w2w::ErrorCode::io, std::string("cannot write ") + trace_path);
  });
}

void w2w_model_free(w2w_model* model) { delete model; }

w2w_status w2w_model_save(const w2w_model* model, const char* path) {
  W2W_REQUIRE(model && path, "model_save: null argument");
  return guarded([&] { w2w::save_model(model->value, path); });
}

w2w_status w2w_model_load(const char* path, w2w_model** out) {
  W2W_REQUIRE(path && out, "model_load: null argument");
  return guarded([&] { *out = new w2w_model{w2w::load_model(path)}; });
}

w2w_status w2w_model_config(const w2w_model* model, w2w_config** out) {
  W2W_REQUIRE(model && out, "model_config: null argument");
  return guarded([&] { *out = new w2w_config{model->value.config}; });
}

size_t w2w_model_entries(const w2w_model* model) {
  return model ? model->value.entries.size() : 0;
}

size_t w2w_model_iterations(const w2w_model* model) {
  return model ? model->value.history.size() : 0;
}

int w2w_model_non_monotonic(const w2w_model* model) {
  return model && model->value.non_monotonic ? 1 : 0;
}

double w2w_model_cutoff(const w2w_model* model) {
  return model ? model->value.cutoff : 0.0;
}

w2w_status w2w_model_params(const w2w_model* model, w2w_class cls,
                            w2w_class_params* out) {
  W2W_REQUIRE(model && out, "model_params: null argument");
  W2W_REQUIRE(cls == W2W_CLASS_CONTENT || cls == W2W_CLASS_FUNCTION,
              "model_params: unknown class");
  const auto& p = model->value.params[static_cast<std::size_t>(cls)];
  if (!p) return failed(W2W_ERR_ARGUMENT, "model_params: class was not estimated");
  *out = {p->lambda_plus, p->lambda_minus, p->lambda, p->tau, p->log_likelihood,
          p->capped ? 1 : 0};
  last_error.clear();
  return W2W_OK;
}

w2w_status w2w_model_summary(const w2w_model* model, char** out) {
  W2W_REQUIRE(model && out, "model_summary: null argument");
  return guarded([&] {
    const auto& m = model->value;
    std::ostringstream s;
    for (std::size_t i = 0; i < m.history.size(); ++i) {
      const auto& r = m.history[i];
      char buf[128];
      std::snprintf(buf, sizeof buf, "iteration %zu: links=%llu objective=%.6f entries=%zu",
                    r.iteration, static_cast<unsigned long long>(r.links),
                    r.objective, r.score_entries);
      s << buf << (i == m.best_iteration ? " (selected)" : "") << '\n';
    }
    for (std::size_t c = 0; c < w2w::kClassCount; ++c) {
      s << w2w::class_name(w2w::class_at(c)) << ": ";
      if (m.params[c]) write_params(s, *m.params[c]);
      else s << "not estimated";
      s << '\n';
    }
    s << "entries: " << m.entries.size() << '\n';
    if (m.non_monotonic) s << "objective decreased; best iteration kept\n";
    *out = copy_string(s.str());
  });
}

w2w_status w2w_link_write(const w2w_model* model, const w2w_bitext* bitext,
                          unsigned threads, const char* path) {
  W2W_REQUIRE(model && bitext && path, "link_write: null argument");
  return guarded([&] {
    const auto scores = w2w::score_table_for(model->value, bitext->value);
    w2w::LinkOptions options;
    options.max_segment_tokens = model->value.config.max_segment_tokens;
    options.threads = threads == 0 ? w2w::resolved_threads(model->value.config) : threads;
    options.keep_links = true;
    const auto result = w2w::link_bitext(bitext->value, scores, options);
    auto out = open_output(path);
    w2w::write_links_tsv(result.links, bitext->value, out);
    if (!out.flush()) w2w::fail(w2w::ErrorCode::io, std::string("cannot write ") + path);
  });
}

w2w_status w2w_lexicon_export(const w2w_model* model, double threshold,
                              w2w_lexicon** out) {
  W2W_REQUIRE(model && out, "lexicon_export: null argument");
  return guarded([&] {
    *out = new w2w_lexicon{w2w::export_lexicon(model->value, threshold)};
  });
}

w2w_status w2w_lexicon_export_top(const w2w_model* model, size_t count,
                                  w2w_lexicon** out) {
  W2W_REQUIRE(model && out, "lexicon_export_top: null argument");
  return guarded([&] { *out = new w2w_lexicon{w2w::export_top(model->value, count)}; });
}

void w2w_lexicon_free(w2w_lexicon* lexicon) { delete lexicon; }

w2w_status w2w_lexicon_save(const w2w_lexicon* lexicon, const char* path) {
  W2W_REQUIRE(lexicon && path, "lexicon_save: null argument");
  return guarded([&] { w2w::save_lexicon(lexicon->value, path); });
}

w2w_status w2w_lexicon_load(const char* path, w2w_lexicon** out) {
  W2W_REQUIRE(path && out, "lexicon_load: null argument");
  return guarded([&] { *out = new w2w_lexicon{w2w::load_lexicon(path)}; });
}

size_t w2w_lexicon_size(const w2w_lexicon* lexicon) {
  return lexicon ? lexicon->value.entries.size() : 0;
}

w2w_status w2w_lexicon_recall(const w2w_lexicon* lexicon,
                              const w2w_bitext* bitext, double* out) {
  W2W_REQUIRE(lexicon && bitext && out, "lexicon_recall: null argument");
  return guarded([&] { *out = w2w::recall(lexicon->value, bitext->value); });
}

w2w_status w2w_eval_sample(const w2w_lexicon* lexicon, const w2w_bitext* bitext,
                           size_t sets, size_t size, uint64_t seed,
                           size_t max_contexts, const char* path) {
  W2W_REQUIRE(lexicon && bitext && path, "eval_sample: null argument");
  return guarded([&] {
    const auto bundle = w2w::make_bundle(lexicon->value, bitext->value, sets,
                                         size, seed, max_contexts);
    auto out = open_output(path);
    out << w2w::bundle_to_json(bundle);
    if (!out.flush()) w2w::fail(w2w::ErrorCode::io, std::string("cannot write ") + path);
  });
}

w2w_status w2w_eval_score(const char* bundle_path, const char* judgments_path,
                          char** report) {
  W2W_REQUIRE(bundle_path && judgments_path && report, "eval_score: null argument");
  return guarded([&] {
    const auto bundle = w2w::bundle_from_json(read_file(bundle_path));
    const auto judgments = w2w::judgments_from_json(read_file(judgments_path));
    *report = copy_string(w2w::format_report(w2w::score_judgments(bundle, judgments)));
  });
}

w2w_status w2w_eval_curve(const w2w_model* model, const char* truth_path,
                          const w2w_bitext* bitext, const double* thresholds,
                          size_t count, size_t points, const char* path) {
  W2W_REQUIRE(model && truth_path && path, "eval_curve: null argument");
  W2W_REQUIRE(count == 0 || thresholds, "eval_curve: null thresholds");
  W2W_REQUIRE(count > 0 || points > 0, "eval_curve: empty threshold grid");
  return guarded([&] {
    const auto truth = w2w::load_truth(truth_path);
    const auto grid = count == 0
                          ? w2w::default_thresholds(model->value, points)
                          : std::vector<double>(thresholds, thresholds + count);
    const auto curve = w2w::precision_recall_curve(
        model->value, truth, grid, bitext ? &bitext->value : nullptr);
    auto out = open_output(path);
    w2w::write_curve_csv(curve, out);
    if (!out.flush()) w2w::fail(w2w::ErrorCode::io, std::string("cannot write ") + path);
  });
}

void w2w_synth_spec_default(w2w_synth_spec* spec) {
  if (!spec) return;
  const w2w::GenerationSpec d;
  *spec = {d.entries,
           d.segments,
           d.min_length,
           d.max_length,
           d.zipf_exponent,
           d.noise,
           d.noise_source == w2w::NoiseSource::uniform ? W2W_NOISE_UNIFORM
                                                       : W2W_NOISE_UNIGRAM,
           d.function_fraction,
           d.collocations};
}

w2w_status w2w_synth(const w2w_synth_spec* spec, uint64_t seed, const char* prefix) {
  W2W_REQUIRE(spec && prefix, "synth: null argument");
  W2W_REQUIRE(spec->noise_source == W2W_NOISE_UNIFORM ||
                  spec->noise_source == W2W_NOISE_UNIGRAM,
              "synth: unknown noise source");
  return guarded([&] {
    w2w::GenerationSpec g;
    g.entries = spec->entries;
    g.segments = spec->segments;
    g.min_length = spec->min_length;
    g.max_length = spec->max_length;
    g.zipf_exponent = spec->zipf_exponent;
    g.noise = spec->noise;
    g.noise_source = spec->noise_source == W2W_NOISE_UNIFORM
                         ? w2w::NoiseSource::uniform
                         : w2w::NoiseSource::unigram;
    g.function_fraction = spec->function_fraction;
    g.collocations = spec->collocations;
    w2w::write_synthetic(w2w::generate_synthetic(g, seed), prefix);
  });
}

}  // extern "C"
