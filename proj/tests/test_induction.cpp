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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <set>

#include "support.hpp"
#include "w2w/error.hpp"
#include "w2w/evalkit.hpp"
#include "w2w/induction.hpp"

using namespace w2w;

namespace {

InduceConfig quiet_config() {
  InduceConfig cfg;
  cfg.threads = 2;
  return cfg;
}

SyntheticCorpus small_corpus(std::uint64_t seed, double noise = 0.0) {
  GenerationSpec spec;
  spec.entries = 60;
  spec.segments = 600;
  spec.noise = noise;
  return generate_synthetic(spec, seed);
}

}  // namespace

TEST_CASE("noise-free corpus: every truth pair survives, rates near the extremes") {
  support::LogCapture log;
  const auto corpus = small_corpus(4);
  const auto b = corpus.bitext();
  const auto model = induce(b, quiet_config());
  std::set<std::pair<std::string, std::string>> have;
  for (const auto& e : model.entries) have.emplace(e.u, e.v);
  for (const auto& p : corpus.truth.pairs) {
    if (!b.source_vocab().find(p.first)) continue;
    CHECK(have.contains(p));
  }
  const auto& content = model.params[class_index(LinkClass::content)];
  REQUIRE(content.has_value());
  CHECK(content->lambda_plus > 0.85);
  CHECK(content->lambda_minus < 1e-3);
}

TEST_CASE("a bare repeated segment has no positive association") {
  support::LogCapture log;
  // Every pair sits exactly at independence, so the initial table is empty.
  const auto b = support::bitext({{"a b c", "x y z"}, {"a b c", "x y z"}, {"a b c", "x y z"}});
  try {
    induce(b, quiet_config());
    FAIL("induction succeeded without associated pairs");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::induction);
  }
}

TEST_CASE("a repeated segment among other material converges quickly") {
  support::LogCapture log;
  const auto b = support::bitext({{"a b c", "x y z"}, {"a b c", "x y z"}, {"a b c", "x y z"},
                                  {"a b c", "x y z"}, {"a b c", "x y z"}, {"d", "w"}, {"e", "v"}});
  const auto model = induce(b, quiet_config());
  CHECK(model.history.size() <= 3);
}

TEST_CASE("history records every iteration and the stop rule holds") {
  support::LogCapture log;
  const auto b = small_corpus(8, 0.1).bitext();
  InduceConfig cfg = quiet_config();
  cfg.cutoff = 2.0;
  const auto model = induce(b, cfg);
  REQUIRE(!model.history.empty());
  CHECK(model.history.size() <= cfg.max_iters);
  for (std::size_t i = 0; i < model.history.size(); ++i) {
    const auto& r = model.history[i];
    CHECK(r.iteration == i + 1);
    CHECK(r.links <= r.cooccurrences);
    if (i + 1 < model.history.size() && i > 0)
      CHECK(r.objective > model.history[i - 1].objective);
  }
  CHECK(model.best_iteration < model.history.size());
  if (!model.non_monotonic) {
    CHECK(model.best_iteration == model.history.size() - 1);
    CHECK(model.params == model.history.back().params);
  } else {
    CHECK(model.history.back().objective <
          model.history[model.history.size() - 2].objective);
    CHECK(model.params == model.history[model.best_iteration].params);
  }
  for (const auto& e : model.entries) CHECK(e.log_l >= std::log(2.0));
  CHECK(std::is_sorted(model.entries.begin(), model.entries.end(), lex_order));
}

TEST_CASE("score table does not grow on noise-free data") {
  support::LogCapture log;
  const auto b = small_corpus(12).bitext();
  InduceConfig cfg = quiet_config();
  cfg.max_iters = 6;
  const auto model = induce(b, cfg);
  for (std::size_t i = 1; i < model.history.size(); ++i)
    CHECK(model.history[i].score_entries <= model.history[i - 1].score_entries);
}

TEST_CASE("observer sees each iteration") {
  support::LogCapture log;
  const auto b = small_corpus(2).bitext();
  std::size_t calls = 0;
  const auto model = induce(b, quiet_config(),
                            [&](const IterationRecord& r, const CoocTable& c, const LinkStats& l) {
                              ++calls;
                              CHECK(r.links == l.total());
                              CHECK(r.cooccurrences == c.total());
                            });
  CHECK(calls == model.history.size());
}

TEST_CASE("no links at all is an induction error") {
  support::LogCapture log;
  // Every pair co-occurs exactly at independence, so no positive association.
  const auto b = support::bitext({{"a", "x"}});
  try {
    induce(b, quiet_config());
    FAIL("expected an induction error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::induction);
  }
}

TEST_CASE("same input gives a bitwise-identical model file") {
  support::LogCapture log;
  const auto b = small_corpus(5, 0.05).bitext();
  InduceConfig a = quiet_config();
  InduceConfig c = quiet_config();
  c.threads = 5;
  c.search.threads = 1;
  const auto one = model_to_json(induce(b, a));
  const auto two = model_to_json(induce(b, a));
  CHECK(one == two);
  auto three_model = induce(b, c);
  three_model.config = a;
  CHECK(model_to_json(three_model) == one);
}

TEST_CASE("model round trip, file and string") {
  support::LogCapture log;
  const auto b = small_corpus(6, 0.05).bitext();
  const auto model = induce(b, quiet_config());
  CHECK(model_from_json(model_to_json(model)) == model);
  support::TempDir dir;
  save_model(model, dir.file("m.json"));
  CHECK(load_model(dir.file("m.json")) == model);
}

TEST_CASE("non-finite scores survive the round trip") {
  Model m;
  m.cutoff = 1.0;
  m.entries.push_back({"a", "x", LinkClass::content, 3, 3, std::numeric_limits<double>::infinity()});
  m.entries.push_back({"b", "y", LinkClass::function, 4, 2, 1.25});
  CHECK(model_from_json(model_to_json(m)) == m);
}

TEST_CASE("malformed and future-version model files are rejected") {
  support::LogCapture log;
  const auto text = model_to_json(induce(small_corpus(1).bitext(), quiet_config()));
  try {
    model_from_json(text.substr(0, text.size() / 2));
    FAIL("truncated file accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::format);
  }
  auto doc = nlohmann::json::parse(text);
  doc["version"] = 99;
  const auto future = doc.dump();
  try {
    model_from_json(future);
    FAIL("future version accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::version);
  }
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), Error);
}

TEST_CASE("score table resolves against another bitext") {
  support::LogCapture log;
  const auto corpus = small_corpus(3);
  const auto b = corpus.bitext();
  const auto model = induce(b, quiet_config());
  const auto table = score_table_for(model, b);
  CHECK(table.size() == model.entries.size());
  const auto other = support::bitext({{"s0 zzz", "qqq"}});
  CHECK(score_table_for(model, other).size() == 0);
}
