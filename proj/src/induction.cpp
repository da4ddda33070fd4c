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

#include "w2w/induction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "w2w/error.hpp"
#include "w2w/estimation.hpp"
#include "w2w/log.hpp"

namespace w2w {

using nlohmann::json;

bool lex_order(const LexEntry& a, const LexEntry& b) {
  if (a.log_l != b.log_l) return a.log_l > b.log_l;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

namespace {

struct Snapshot {
  ClassParamSet params;
  ScoreTable scores;
  LinkStats links;
};

std::vector<LexEntry> entries_from(const ScoreTable& scores,
                                   const CoocTable& cooc,
                                   const LinkStats& links,
                                   const Bitext& bitext) {
  std::vector<LexEntry> out;
  out.reserve(scores.size());
  for (std::size_t c = 0; c < kClassCount; ++c) {
    const auto cls = class_at(c);
    for (const auto& [key, s] : scores.pairs(cls)) {
      const WordId u = key_source(key), v = key_target(key);
      out.push_back({bitext.source_vocab().surface(u),
                     bitext.target_vocab().surface(v), cls,
                     cooc.count(cls, u, v), links.count(cls, u, v), s});
    }
  }
  std::sort(out.begin(), out.end(), lex_order);
  return out;
}

std::string describe_params(const ClassParamSet& params) {
  std::ostringstream out;
  out.precision(6);
  for (const auto& p : params) {
    if (!p) continue;
    out << ' ' << class_name(p->cls) << "(l+=" << p->lambda_plus
        << " l-=" << p->lambda_minus << " tau=" << p->tau << ")";
  }
  return out.str();
}

}  // namespace

Model induce(const Bitext& bitext, const InduceConfig& config,
             const IterationObserver& observer, std::ostream* trace) {
  if (bitext.empty())
    fail(ErrorCode::precondition, "induce: bitext has no segments");
  const unsigned threads = resolved_threads(config);
  const CoocTable cooc =
      build_cooc(bitext, {config.max_segment_tokens, threads, ClassPolicy::strict});
  if (cooc.total() == 0)
    fail(ErrorCode::induction, "induction failed: no same-class co-occurrences");

  SearchConfig search = config.search;
  search.threads = threads;
  const LinkOptions link_options{config.max_segment_tokens, threads, false};

  Model model;
  model.config = config;
  model.cutoff = config.cutoff;

  ScoreTable scores = initial_scores(cooc);
  std::optional<Snapshot> best;
  double best_objective = -std::numeric_limits<double>::infinity();

  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    LinkResult linked = link_bitext(bitext, scores, link_options);

    IterationRecord record;
    record.iteration = iter;
    record.links = linked.stats.total();
    record.cooccurrences = cooc.total();
    bool any = false;
    for (std::size_t c = 0; c < kClassCount; ++c) {
      record.params[c] = estimate_params(linked.stats, cooc, class_at(c), search,
                                        {trace, iter});
      if (record.params[c]) {
        any = true;
        record.objective += record.params[c]->log_likelihood;
      }
    }
    if (!any) {
      if (!best)
        fail(ErrorCode::induction,
             "induction failed: no class could be estimated (K=" +
                 std::to_string(record.links) +
                 ", N=" + std::to_string(record.cooccurrences) + ", " +
                 std::to_string(scores.size()) + " scored pairs)");
      log_warning("iteration " + std::to_string(iter) +
                  ": no class could be estimated; stopping");
      break;
    }

    ScoreTable next = rebuild_scores(cooc, linked.stats, record.params,
                                     config.cutoff);
    record.score_entries = next.size();
    log_info("iteration " + std::to_string(iter) + ": K=" +
             std::to_string(record.links) + " N=" +
             std::to_string(record.cooccurrences) + " logPr=" +
             std::to_string(record.objective) + " entries=" +
             std::to_string(record.score_entries) +
             describe_params(record.params));

    const bool improved =
        model.history.empty() || record.objective > model.history.back().objective;
    const bool decreased =
        !model.history.empty() && record.objective < model.history.back().objective;
    model.history.push_back(record);
    if (observer) observer(record, cooc, linked.stats);

    if (record.objective >= best_objective) {
      best_objective = record.objective;
      model.best_iteration = model.history.size() - 1;
      best = Snapshot{record.params, next, std::move(linked.stats)};
    }
    if (!improved) {
      model.non_monotonic = decreased;
      break;
    }
    scores = std::move(next);
  }

  model.params = best->params;
  model.entries = entries_from(best->scores, cooc, best->links, bitext);
  return model;
}

ScoreTable score_table_for(const Model& model, const Bitext& bitext) {
  ScoreTable table(ScoreKind::likelihood_ratio, model.cutoff);
  for (const auto& e : model.entries) {
    const auto u = bitext.source_vocab().find(e.u);
    const auto v = bitext.target_vocab().find(e.v);
    if (!u || !v) continue;
    if (bitext.source_vocab().link_class(*u) != e.cls ||
        bitext.target_vocab().link_class(*v) != e.cls)
      continue;
    table.insert(e.cls, *u, *v, e.log_l);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  fail(ErrorCode::format, "expected a number, got '" + s + "'");
}

json params_json(const ClassParamSet& params) {
  json out = json::array();
  for (const auto& p : params) {
    if (!p) {
      out.push_back(nullptr);
      continue;
    }
    out.push_back({{"class", class_name(p->cls)},
                   {"lambda_plus", number(p->lambda_plus)},
                   {"lambda_minus", number(p->lambda_minus)},
                   {"lambda", number(p->lambda)},
                   {"tau", number(p->tau)},
                   {"log_likelihood", number(p->log_likelihood)},
                   {"capped", p->capped}});
  }
  return out;
}

ClassParamSet params_from(const json& j) {
  ClassParamSet out;
  if (!j.is_array() || j.size() != kClassCount)
    fail(ErrorCode::format, "params must list one slot per link class");
  for (std::size_t c = 0; c < kClassCount; ++c) {
    const auto& p = j[c];
    if (p.is_null()) continue;
    ClassParams cp;
    cp.cls = parse_class(p.at("class").get<std::string>());
    cp.lambda_plus = read_number(p.at("lambda_plus"));
    cp.lambda_minus = read_number(p.at("lambda_minus"));
    cp.lambda = read_number(p.at("lambda"));
    cp.tau = read_number(p.at("tau"));
    cp.log_likelihood = read_number(p.at("log_likelihood"));
    cp.capped = p.at("capped").get<bool>();
    out[c] = cp;
  }
  return out;
}

}  // namespace

std::string model_to_json(const Model& model) {
  json config = json::object();
  for (const auto& [key, value] : config_entries(model.config))
    config[key] = value;

  json history = json::array();
  for (const auto& r : model.history)
    history.push_back({{"iteration", r.iteration},
                       {"links", r.links},
                       {"cooccurrences", r.cooccurrences},
                       {"objective", number(r.objective)},
                       {"score_entries", r.score_entries},
                       {"params", params_json(r.params)}});

  json entries = json::array();
  for (const auto& e : model.entries)
    entries.push_back(
        json::array({e.u, e.v, class_name(e.cls), e.n, e.k, number(e.log_l)}));

  json doc = {{"format", "w2w-model"},
              {"version", kModelFormatVersion},
              {"config", config},
              {"cutoff", number(model.cutoff)},
              {"best_iteration", model.best_iteration},
              {"non_monotonic", model.non_monotonic},
              {"params", params_json(model.params)},
              {"history", history},
              {"entries", entries}};
  return doc.dump() + "\n";
}

Model model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::format, std::string("malformed model file: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != "w2w-model")
      fail(ErrorCode::format, "malformed model file: not a w2w model");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion)
      fail(ErrorCode::version,
           "unsupported model format version " + std::to_string(version) +
               " (this build reads version " +
               std::to_string(kModelFormatVersion) + ")");

    Model model;
    for (const auto& [key, value] : doc.at("config").items())
      set_config_value(model.config, key, value.get<std::string>());
    model.cutoff = read_number(doc.at("cutoff"));
    model.best_iteration = doc.at("best_iteration").get<std::size_t>();
    model.non_monotonic = doc.at("non_monotonic").get<bool>();
    model.params = params_from(doc.at("params"));
    for (const auto& r : doc.at("history")) {
      IterationRecord rec;
      rec.iteration = r.at("iteration").get<std::size_t>();
      rec.links = r.at("links").get<std::uint64_t>();
      rec.cooccurrences = r.at("cooccurrences").get<std::uint64_t>();
      rec.objective = read_number(r.at("objective"));
      rec.score_entries = r.at("score_entries").get<std::size_t>();
      rec.params = params_from(r.at("params"));
      model.history.push_back(std::move(rec));
    }
    for (const auto& e : doc.at("entries")) {
      if (!e.is_array() || e.size() != 6)
        fail(ErrorCode::format, "model entry must have 6 fields");
      model.entries.push_back({e[0].get<std::string>(), e[1].get<std::string>(),
                               parse_class(e[2].get<std::string>()),
                               e[3].get<std::uint64_t>(),
                               e[4].get<std::uint64_t>(), read_number(e[5])});
    }
    if (!model.history.empty() && model.best_iteration >= model.history.size())
      fail(ErrorCode::format, "best_iteration out of range");
    return model;
  } catch (const json::exception& e) {
    fail(ErrorCode::format, std::string("malformed model file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::argument) fail(ErrorCode::format, e.what());
    throw;
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  out << model_to_json(model);
  if (!out) fail(ErrorCode::io, "write failed: " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace w2w
