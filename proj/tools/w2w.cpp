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

// w2w command-line driver. Talks to the library only through the C API.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "w2w/w2w.h"

namespace {

// Thrown after a failed C call; carries the status tag for the error line.
struct Failure {
  std::string tag;
  std::string message;
};

void check(w2w_status status) {
  if (status != W2W_OK) throw Failure{w2w_status_name(status), w2w_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Config = std::unique_ptr<w2w_config, Deleter<w2w_config, w2w_config_free>>;
using BitextPtr = std::unique_ptr<w2w_bitext, Deleter<w2w_bitext, w2w_bitext_free>>;
using ModelPtr = std::unique_ptr<w2w_model, Deleter<w2w_model, w2w_model_free>>;
using LexiconPtr = std::unique_ptr<w2w_lexicon, Deleter<w2w_lexicon, w2w_lexicon_free>>;

std::string take(char* s) {
  std::string out(s ? s : "");
  w2w_string_free(s);
  return out;
}

void print_resolved(const std::string& lines) {
  std::fprintf(stderr, "# resolved configuration\n");
  std::size_t start = 0;
  while (start < lines.size()) {
    auto end = lines.find('\n', start);
    if (end == std::string::npos) end = lines.size();
    std::fprintf(stderr, "#   %s\n", lines.substr(start, end - start).c_str());
    start = end + 1;
  }
}

// Settings shared by every command that reads a bitext.
struct ConfigFlags {
  std::string file;
  std::vector<std::string> sets;
  std::string fw_source, fw_target;
  std::string cutoff, max_iters, seed, threads;

  void attach(CLI::App* cmd, bool induction) {
    cmd->add_option("--config", file, "key = value configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", sets, "override one key, as KEY=VALUE (repeatable)");
    cmd->add_option("--fw-source", fw_source, "source function-word list");
    cmd->add_option("--fw-target", fw_target, "target function-word list");
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    if (!induction) return;
    cmd->add_option("--cutoff", cutoff, "likelihood-ratio cutoff (default 1)");
    cmd->add_option("--max-iters", max_iters, "iteration limit (default 20)");
    cmd->add_option("--seed", seed, "recorded seed (default 0)");
  }

  // Config file first, then --set, then dedicated flags: later wins.
  Config resolve() const {
    w2w_config* raw = nullptr;
    check(w2w_config_new(&raw));
    Config cfg(raw);
    if (!file.empty()) check(w2w_config_load(cfg.get(), file.c_str()));
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw Failure{"argument", "--set expects KEY=VALUE, got '" + kv + "'"};
      check(w2w_config_set(cfg.get(), kv.substr(0, eq).c_str(),
                           kv.substr(eq + 1).c_str()));
    }
    auto flag = [&](const char* key, const std::string& value) {
      if (!value.empty()) check(w2w_config_set(cfg.get(), key, value.c_str()));
    };
    flag("fw_source", fw_source);
    flag("fw_target", fw_target);
    flag("cutoff", cutoff);
    flag("max_iters", max_iters);
    flag("seed", seed);
    flag("threads", threads);
    return cfg;
  }
};

Config describe(Config cfg) {
  char* text = nullptr;
  check(w2w_config_describe(cfg.get(), &text));
  print_resolved(take(text));
  return cfg;
}

BitextPtr load_bitext(const w2w_config* cfg, const std::string& src,
                      const std::string& tgt) {
  w2w_bitext* raw = nullptr;
  check(w2w_bitext_load(cfg, src.c_str(), tgt.c_str(), &raw));
  return BitextPtr(raw);
}

ModelPtr load_model(const std::string& path) {
  w2w_model* raw = nullptr;
  check(w2w_model_load(path.c_str(), &raw));
  return ModelPtr(raw);
}

Config model_config(const w2w_model* model) {
  w2w_config* raw = nullptr;
  check(w2w_model_config(model, &raw));
  return Config(raw);
}

std::string fmt(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word-to-word translation lexicon induction by competitive linking."};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress lines");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic bitext with its truth lexicon");
  w2w_synth_spec spec;
  w2w_synth_spec_default(&spec);
  std::uint64_t synth_seed = 0;
  std::string synth_out, noise_source = "uniform";
  synth->add_option("--out", synth_out,
                    "output prefix; writes .src .tgt .fw.src .fw.tgt .truth.tsv")
      ->required();
  synth->add_option("--entries", spec.entries, "lexicon entries per side")->capture_default_str();
  synth->add_option("--segments", spec.segments, "segment pairs")->capture_default_str();
  synth->add_option("--min-length", spec.min_length, "shortest source segment")->capture_default_str();
  synth->add_option("--max-length", spec.max_length, "longest source segment")->capture_default_str();
  synth->add_option("--zipf", spec.zipf_exponent, "Zipf exponent of word frequencies")->capture_default_str();
  synth->add_option("--noise", spec.noise, "probability of replacing a target token")->capture_default_str();
  synth->add_option("--noise-source", noise_source, "replacement distribution")
      ->check(CLI::IsMember({"uniform", "unigram"}))
      ->capture_default_str();
  synth->add_option("--function-fraction", spec.function_fraction,
                    "share of the vocabulary (most frequent) treated as function words")
      ->capture_default_str();
  synth->add_option("--collocations", spec.collocations,
                    "source collocations injected (head always followed by follower)")
      ->capture_default_str();
  synth->add_option("--seed", synth_seed, "random seed")->capture_default_str();

  // induce
  auto* induce = app.add_subcommand("induce", "induce a translation model from a bitext");
  ConfigFlags induce_flags;
  std::string induce_src, induce_tgt, induce_model, induce_trace;
  induce->add_option("--source", induce_src, "source side, one segment per line")->required();
  induce->add_option("--target", induce_tgt, "target side, aligned line by line")->required();
  induce->add_option("--model", induce_model, "output model file (JSON)")->required();
  induce->add_option("--trace", induce_trace, "write every evaluated parameter point here");
  induce_flags.attach(induce, true);

  // lexicon
  auto* lexicon = app.add_subcommand("lexicon", "export the link types above a threshold");
  std::string lex_model, lex_out;
  double lex_threshold = 1.0;
  std::size_t lex_size = 0;
  lexicon->add_option("--model", lex_model, "model file")->required();
  lexicon->add_option("--out", lex_out, "output TSV")->required();
  auto* lex_threshold_opt = lexicon->add_option(
      "--threshold", lex_threshold, "likelihood-ratio threshold (default: the model cutoff)");
  lexicon->add_option("--size", lex_size, "keep the N highest-scoring entries instead")
      ->excludes(lex_threshold_opt);

  // link
  auto* link = app.add_subcommand("link", "link the tokens of a bitext under a model");
  std::string link_model, link_src, link_tgt, link_out;
  unsigned link_threads = 0;
  link->add_option("--model", link_model, "model file")->required();
  link->add_option("--source", link_src, "source side")->required();
  link->add_option("--target", link_tgt, "target side")->required();
  link->add_option("--out", link_out, "output token-link TSV")->required();
  link->add_option("--threads", link_threads, "worker threads (0 = model setting)");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluation workflow");
  eval->require_subcommand(1);
  eval->fallthrough();

  auto* sample = eval->add_subcommand("sample", "sample link types into an adjudication bundle");
  ConfigFlags sample_flags;
  std::string sample_lex, sample_src, sample_tgt, sample_out;
  std::size_t sample_sets = 5, sample_size = 100, sample_contexts = 5;
  std::uint64_t sample_seed = 0;
  sample->add_option("--lexicon", sample_lex, "lexicon TSV")->required();
  sample->add_option("--source", sample_src, "source side")->required();
  sample->add_option("--target", sample_tgt, "target side")->required();
  sample->add_option("--out", sample_out, "output bundle JSON")->required();
  sample->add_option("--sets", sample_sets, "independent samples")->capture_default_str();
  sample->add_option("--size", sample_size, "link types per sample")->capture_default_str();
  sample->add_option("--contexts", sample_contexts, "concordance lines per item")->capture_default_str();
  sample->add_option("--seed", sample_seed, "sampling seed")->capture_default_str();
  sample_flags.attach(sample, false);

  auto* score = eval->add_subcommand("score", "precision with 95% intervals from judgments");
  std::string score_bundle, score_judgments;
  score->add_option("--bundle", score_bundle, "bundle JSON")->required();
  score->add_option("--judgments", score_judgments, "judgment set JSON")->required();

  auto* curve = eval->add_subcommand("curve", "precision/recall against a truth file");
  std::string curve_model, curve_truth, curve_out, curve_src, curve_tgt;
  std::vector<double> curve_thresholds;
  std::size_t curve_points = 10;
  curve->add_option("--model", curve_model, "model file")->required();
  curve->add_option("--truth", curve_truth, "truth TSV written by synth")->required();
  curve->add_option("--out", curve_out, "output CSV")->required();
  curve->add_option("--thresholds", curve_thresholds, "explicit threshold list");
  curve->add_option("--points", curve_points, "grid size when no list is given")
      ->capture_default_str();
  auto* curve_src_opt =
      curve->add_option("--source", curve_src, "training source; restricts recall to co-occurring pairs");
  auto* curve_tgt_opt = curve->add_option("--target", curve_tgt, "training target");
  curve_src_opt->needs(curve_tgt_opt);
  curve_tgt_opt->needs(curve_src_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error[usage]: %s\n", e.what());
    return 2;
  }

  w2w_set_log_quiet(quiet ? 1 : 0);

  try {
    if (*synth) {
      spec.noise_source = noise_source == "unigram" ? W2W_NOISE_UNIGRAM : W2W_NOISE_UNIFORM;
      print_resolved("entries = " + std::to_string(spec.entries) +
                     "\nsegments = " + std::to_string(spec.segments) +
                     "\nmin_length = " + std::to_string(spec.min_length) +
                     "\nmax_length = " + std::to_string(spec.max_length) +
                     "\nzipf_exponent = " + fmt(spec.zipf_exponent) +
                     "\nnoise = " + fmt(spec.noise) + "\nnoise_source = " + noise_source +
                     "\nfunction_fraction = " + fmt(spec.function_fraction) +
                     "\ncollocations = " + std::to_string(spec.collocations) +
                     "\nseed = " + std::to_string(synth_seed));
      check(w2w_synth(&spec, synth_seed, synth_out.c_str()));
    } else if (*induce) {
      Config cfg = describe(induce_flags.resolve());
      BitextPtr bitext = load_bitext(cfg.get(), induce_src, induce_tgt);
      w2w_model* raw = nullptr;
      check(w2w_induce(bitext.get(), cfg.get(),
                       induce_trace.empty() ? nullptr : induce_trace.c_str(), &raw));
      ModelPtr model(raw);
      char* summary = nullptr;
      check(w2w_model_summary(model.get(), &summary));
      if (!quiet) std::fputs(take(summary).c_str(), stderr);
      else w2w_string_free(summary);
      check(w2w_model_save(model.get(), induce_model.c_str()));
    } else if (*lexicon) {
      ModelPtr model = load_model(lex_model);
      describe(model_config(model.get()));
      w2w_lexicon* raw = nullptr;
      if (lexicon->count("--size")) {
        check(w2w_lexicon_export_top(model.get(), lex_size, &raw));
      } else {
        const double threshold =
            lexicon->count("--threshold") ? lex_threshold : w2w_model_cutoff(model.get());
        check(w2w_lexicon_export(model.get(), threshold, &raw));
      }
      LexiconPtr lex(raw);
      check(w2w_lexicon_save(lex.get(), lex_out.c_str()));
      if (!quiet)
        std::fprintf(stderr, "%zu entries written to %s\n", w2w_lexicon_size(lex.get()),
                     lex_out.c_str());
    } else if (*link) {
      ModelPtr model = load_model(link_model);
      Config cfg = describe(model_config(model.get()));
      BitextPtr bitext = load_bitext(cfg.get(), link_src, link_tgt);
      check(w2w_link_write(model.get(), bitext.get(), link_threads, link_out.c_str()));
    } else if (*sample) {
      Config cfg = describe(sample_flags.resolve());
      BitextPtr bitext = load_bitext(cfg.get(), sample_src, sample_tgt);
      w2w_lexicon* raw = nullptr;
      check(w2w_lexicon_load(sample_lex.c_str(), &raw));
      LexiconPtr lex(raw);
      check(w2w_eval_sample(lex.get(), bitext.get(), sample_sets, sample_size, sample_seed,
                            sample_contexts, sample_out.c_str()));
    } else if (*score) {
      print_resolved("bundle = " + score_bundle + "\njudgments = " + score_judgments);
      char* report = nullptr;
      check(w2w_eval_score(score_bundle.c_str(), score_judgments.c_str(), &report));
      std::fputs(take(report).c_str(), stdout);
    } else if (*curve) {
      ModelPtr model = load_model(curve_model);
      Config cfg = describe(model_config(model.get()));
      BitextPtr bitext;
      if (!curve_src.empty()) bitext = load_bitext(cfg.get(), curve_src, curve_tgt);
      check(w2w_eval_curve(model.get(), curve_truth.c_str(), bitext.get(),
                           curve_thresholds.data(), curve_thresholds.size(), curve_points,
                           curve_out.c_str()));
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error[%s]: %s\n", f.tag.c_str(), f.message.c_str());
    return 1;
  }
  return 0;
}
