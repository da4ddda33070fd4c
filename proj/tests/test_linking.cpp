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

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"
#include "w2w/cooc.hpp"
#include "w2w/linking.hpp"
#include "w2w/scoring.hpp"

using namespace w2w;

namespace {

WordId src(const Bitext& b, const char* s) { return *b.source_vocab().find(s); }
WordId tgt(const Bitext& b, const char* s) { return *b.target_vocab().find(s); }

std::set<std::pair<std::string, std::string>> types(const Bitext& b,
                                                    const std::vector<TokenLink>& links) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& l : links)
    out.emplace(b.source_vocab().surface(l.u), b.target_vocab().surface(l.v));
  return out;
}

}  // namespace

TEST_CASE("best pair first, then the best remaining") {
  const auto b = support::bitext({{"a b", "x y"}});
  ScoreTable s;
  s.insert(LinkClass::content, src(b, "a"), tgt(b, "x"), 5);
  s.insert(LinkClass::content, src(b, "a"), tgt(b, "y"), 4);
  s.insert(LinkClass::content, src(b, "b"), tgt(b, "y"), 3);
  const auto links = link_segment(b, b.segments()[0], s);
  CHECK(types(b, links) == std::set<std::pair<std::string, std::string>>{{"a", "x"}, {"b", "y"}});
  CHECK(links[0].score == 5);
}

TEST_CASE("a token links at most once") {
  const auto b = support::bitext({{"a", "x y"}});
  ScoreTable s;
  s.insert(LinkClass::content, 0, tgt(b, "x"), 3);
  s.insert(LinkClass::content, 0, tgt(b, "y"), 2);
  const auto links = link_segment(b, b.segments()[0], s);
  REQUIRE(links.size() == 1);
  CHECK(links[0].target_pos == 0);
}

TEST_CASE("indirect association loses the competition") {
  const auto b = support::bitext({{"u1 u2", "v1"}});
  ScoreTable s;
  s.insert(LinkClass::content, src(b, "u1"), 0, 10);
  s.insert(LinkClass::content, src(b, "u2"), 0, 4);
  const auto links = link_segment(b, b.segments()[0], s);
  CHECK(types(b, links) == std::set<std::pair<std::string, std::string>>{{"u1", "v1"}});
}

TEST_CASE("ties go to the leftmost tokens") {
  const auto b = support::bitext({{"a a", "x x x"}});
  ScoreTable s;
  s.insert(LinkClass::content, 0, 0, 1);
  const auto links = link_segment(b, b.segments()[0], s);
  REQUIRE(links.size() == 2);
  CHECK((links[0].source_pos == 0 && links[0].target_pos == 0));
  CHECK((links[1].source_pos == 1 && links[1].target_pos == 1));
}

TEST_CASE("content and function tokens never link to each other") {
  FunctionWords fw;
  fw.source = {"the"};
  fw.target = {"le"};
  const auto b = support::bitext({{"the", "chien"}}, fw);
  ScoreTable s;
  s.insert(LinkClass::content, 0, 0, 9);
  s.insert(LinkClass::function, 0, 0, 9);
  CHECK(link_segment(b, b.segments()[0], s).empty());
}

TEST_CASE("saturated scores rank above finite ones") {
  const auto b = support::bitext({{"a b", "x"}});
  ScoreTable s;
  s.insert(LinkClass::content, src(b, "a"), 0, 1e300);
  s.insert(LinkClass::content, src(b, "b"), 0, std::numeric_limits<double>::infinity());
  const auto links = link_segment(b, b.segments()[0], s);
  REQUIRE(links.size() == 1);
  CHECK(links[0].u == src(b, "b"));
}

TEST_CASE("identical segments add up") {
  const auto b = support::bitext({{"a", "x"}, {"a", "x"}});
  ScoreTable s;
  s.insert(LinkClass::content, 0, 0, 1);
  const auto r = link_bitext(b, s);
  CHECK(r.stats.count(LinkClass::content, 0, 0) == 2);
  CHECK(r.stats.total() == 2);
}

TEST_CASE("empty score table links nothing") {
  const auto b = support::random_bitext(50, 8, 10, 1);
  const auto r = link_bitext(b, ScoreTable{});
  CHECK(r.stats.total() == 0);
  std::uint64_t tokens = 0;
  for (const auto& seg : b.segments()) tokens += seg.source.size();
  CHECK(r.unlinked_source == tokens);
}

TEST_CASE("aggregate equals the sum of hand-traced segments") {
  const auto b = support::bitext({{"a b", "x y"}, {"a", "x y"}, {"u1 u2", "v1"}});
  ScoreTable s;
  auto put = [&](const char* u, const char* v, double score) {
    s.insert(LinkClass::content, src(b, u), tgt(b, v), score);
  };
  put("a", "x", 5);
  put("a", "y", 4);
  put("b", "y", 3);
  put("u1", "v1", 10);
  put("u2", "v1", 4);
  const auto r = link_bitext(b, s);
  CHECK(r.stats.count(LinkClass::content, src(b, "a"), tgt(b, "x")) == 2);
  CHECK(r.stats.count(LinkClass::content, src(b, "b"), tgt(b, "y")) == 1);
  CHECK(r.stats.count(LinkClass::content, src(b, "u1"), tgt(b, "v1")) == 1);
  CHECK(r.stats.count(LinkClass::content, src(b, "u2"), tgt(b, "v1")) == 0);
  CHECK(r.stats.count(LinkClass::content, src(b, "a"), tgt(b, "y")) == 0);
  CHECK(r.stats.total() == 4);
  CHECK(r.unlinked_target == 1);
}

TEST_CASE("random segments: one-to-one, bounds, greedy replay, partition invariance") {
  const auto b = support::random_bitext(1000, 14, 25, 77);
  const auto cooc = build_cooc(b);
  const auto scores = initial_scores(cooc);
  LinkOptions opts;
  opts.keep_links = true;
  const auto base = link_bitext(b, scores, opts);
  std::size_t at = 0;
  for (const auto& seg : b.segments()) {
    const auto links = link_segment(b, seg, scores);
    std::set<std::uint32_t> s, t;
    for (const auto& l : links) {
      CHECK(s.insert(l.source_pos).second);
      CHECK(t.insert(l.target_pos).second);
      CHECK(l.segment == seg.index);
    }
    CHECK(links.size() <= std::min(seg.source.size(), seg.target.size()));
    CHECK(oracle::greedy_replay(b, seg, scores, links));
    for (const auto& l : links) CHECK(base.links[at++] == l);
  }
  CHECK(at == base.links.size());
  for (std::size_t c = 0; c < kClassCount; ++c)
    for (const auto& [key, k] : base.stats.pairs(class_at(c)))
      CHECK(k <= cooc.pairs(class_at(c)).at(key));
  for (unsigned threads : {2u, 4u, 7u, 32u}) {
    LinkOptions par = opts;
    par.threads = threads;
    const auto r = link_bitext(b, scores, par);
    CHECK(r.stats == base.stats);
    CHECK(r.links == base.links);
    CHECK(r.unlinked_source == base.unlinked_source);
  }
}

TEST_CASE("raising the cutoff never adds link types") {
  const auto b = support::random_bitext(300, 10, 20, 5);
  const auto cooc = build_cooc(b);
  const auto first = link_bitext(b, initial_scores(cooc));
  ClassParamSet params;
  for (std::size_t c = 0; c < kClassCount; ++c) {
    ClassParams p;
    p.cls = class_at(c);
    p.lambda_plus = 0.7;
    p.lambda_minus = 0.01;
    params[c] = p;
  }
  const auto low = link_bitext(b, rebuild_scores(cooc, first.stats, params, 1.0));
  const auto high = link_bitext(b, rebuild_scores(cooc, first.stats, params, 50.0));
  for (std::size_t c = 0; c < kClassCount; ++c)
    for (const auto& [key, k] : high.stats.pairs(class_at(c)))
      CHECK(low.stats.pairs(class_at(c)).contains(key));
}

TEST_CASE("segments over the cap are skipped") {
  const auto b = support::bitext({{"a b c", "x"}, {"a", "x"}});
  ScoreTable s;
  s.insert(LinkClass::content, 0, 0, 1);
  LinkOptions opts;
  opts.max_segment_tokens = 2;
  const auto r = link_bitext(b, s, opts);
  CHECK(r.skipped_segments == 1);
  CHECK(r.stats.total() == 1);
}

TEST_CASE("token link dump") {
  const auto b = support::bitext({{"a b", "x"}});
  ScoreTable s;
  s.insert(LinkClass::content, 1, 0, 2.5);
  std::ostringstream out;
  write_links_tsv(link_segment(b, b.segments()[0], s), b, out);
  CHECK(out.str() == "0\t1\t0\tb\tx\tcontent\t2.5\n");
}
