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
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "support.hpp"
#include "w2w/error.hpp"
#include "w2w/evalkit.hpp"
#include "w2w/lexicon.hpp"

using namespace w2w;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Model hand_model() {
  Model m;
  m.cutoff = 2.0;
  m.entries = {{"a", "x", LinkClass::content, 9, 9, kInf},
               {"b", "y", LinkClass::content, 6, 5, 12.5},
               {"c", "y", LinkClass::content, 3, 1, 2.25},
               {"the", "le", LinkClass::function, 40, 30, 1.0},
               {"d", "z", LinkClass::content, 2, 1, std::log(2.0)}};
  std::sort(m.entries.begin(), m.entries.end(), lex_order);
  return m;
}

std::set<std::pair<std::string, std::string>> pairs(const Lexicon& lex) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : lex.entries) out.emplace(e.u, e.v);
  return out;
}

}  // namespace

TEST_CASE("export at the induction cutoff keeps every surviving type") {
  support::LogCapture log;
  const auto m = hand_model();
  const auto lex = export_lexicon(m, m.cutoff);
  CHECK(lex.entries == m.entries);
  REQUIRE(lex.threshold.has_value());
  CHECK(*lex.threshold == m.cutoff);
  CHECK(log.warnings() == 0);
}

TEST_CASE("export at an infinite threshold keeps only infinite scores") {
  support::LogCapture log;
  auto m = hand_model();
  CHECK(export_lexicon(m, kInf).entries.size() == 1);
  m.entries.erase(m.entries.begin());
  CHECK(export_lexicon(m, kInf).entries.empty());
}

TEST_CASE("entries are exactly those at or above log threshold") {
  support::LogCapture log;
  const auto m = hand_model();
  for (double t : {2.0, 2.5, std::exp(2.25), 9.4, 1e5, 1e300}) {
    const auto lex = export_lexicon(m, t);
    std::size_t expected = 0;
    for (const auto& e : m.entries) expected += e.log_l >= std::log(t);
    CHECK(lex.entries.size() == expected);
    for (const auto& e : lex.entries) CHECK(e.log_l >= std::log(t));
  }
}

TEST_CASE("raising the threshold never adds entries") {
  support::LogCapture log;
  const auto corpus = [] {
    GenerationSpec spec;
    spec.entries = 80;
    spec.segments = 500;
    spec.noise = 0.1;
    return generate_synthetic(spec, 11);
  }();
  InduceConfig cfg;
  cfg.threads = 2;
  const auto model = induce(corpus.bitext(), cfg);
  double prev = model.cutoff;
  auto prev_pairs = pairs(export_lexicon(model, prev));
  for (int i = 1; i <= 12; ++i) {
    const double t = prev * 2.7;
    const auto now = pairs(export_lexicon(model, t));
    for (const auto& p : now) CHECK(prev_pairs.contains(p));
    prev = t;
    prev_pairs = now;
  }
}

TEST_CASE("a threshold below the cutoff warns and is raised to the cutoff") {
  support::LogCapture log;
  const auto m = hand_model();
  const auto lex = export_lexicon(m, 0.5);
  CHECK(log.warnings() == 1);
  CHECK(*lex.threshold == m.cutoff);
  CHECK(lex.entries == export_lexicon(m, m.cutoff).entries);
  CHECK_THROWS_AS(export_lexicon(m, std::nan("")), Error);
}

TEST_CASE("sorted order is total: score, then source, then target") {
  support::LogCapture log;
  Model m;
  m.entries = {{"b", "x", LinkClass::content, 1, 1, 3.0},
               {"a", "y", LinkClass::content, 1, 1, 3.0},
               {"a", "x", LinkClass::content, 1, 1, 3.0},
               {"c", "z", LinkClass::content, 1, 1, 4.0}};
  const auto lex = export_lexicon(m, 1.0);
  REQUIRE(lex.entries.size() == 4);
  CHECK(lex.entries[0].u == "c");
  CHECK((lex.entries[1].u == "a" && lex.entries[1].v == "x"));
  CHECK((lex.entries[2].u == "a" && lex.entries[2].v == "y"));
  CHECK(lex.entries[3].u == "b");
}

TEST_CASE("recall pools both vocabularies") {
  const auto b = support::bitext({{"a b", "x y"}, {"c", "z"}});
  Lexicon full;
  full.entries = {{"a", "x", LinkClass::content, 1, 1, 1},
                  {"b", "y", LinkClass::content, 1, 1, 1},
                  {"c", "z", LinkClass::content, 1, 1, 1}};
  CHECK(recall(full, b) == 1.0);
  CHECK(recall(Lexicon{}, b) == 0.0);
  Lexicon one;
  one.entries = {{"a", "x", LinkClass::content, 1, 1, 1}};
  CHECK(recall(one, b) == doctest::Approx(2.0 / 6.0));
  // A word outside the bitext does not count.
  one.entries.push_back({"q", "y", LinkClass::content, 1, 1, 1});
  CHECK(recall(one, b) == doctest::Approx(3.0 / 6.0));
}

TEST_CASE("lexicon TSV round trip is exact") {
  Lexicon lex;
  lex.threshold = 2.0;
  lex.entries = hand_model().entries;
  lex.entries.back().log_l = 0.1 + 0.2;
  std::sort(lex.entries.begin(), lex.entries.end(), lex_order);
  std::stringstream s;
  write_lexicon_tsv(lex, s);
  CHECK(s.str().starts_with("#threshold=2\nu\tv\tclass\tn\tk\tlogL\n"));
  CHECK(read_lexicon_tsv(s) == lex);

  lex.threshold.reset();
  support::TempDir dir;
  save_lexicon(lex, dir.file("lex.tsv"));
  CHECK(load_lexicon(dir.file("lex.tsv")) == lex);
}

TEST_CASE("malformed lexicon files are rejected") {
  auto code = [](const std::string& text) -> std::optional<ErrorCode> {
    std::istringstream in(text);
    try {
      read_lexicon_tsv(in);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  CHECK(code("") == ErrorCode::format);
  CHECK(code("a\tb\n") == ErrorCode::format);
  CHECK(code("u\tv\tclass\tn\tk\tlogL\na\tx\tcontent\t1\t1\n") == ErrorCode::format);
  CHECK(code("u\tv\tclass\tn\tk\tlogL\na\tx\tcontent\tone\t1\t2\n") == ErrorCode::format);
  CHECK(code("#threshold=abc\nu\tv\tclass\tn\tk\tlogL\n") == ErrorCode::format);
  CHECK_THROWS_AS(load_lexicon("/nonexistent/lex.tsv"), Error);
}

TEST_CASE("size selector keeps the top entries in order") {
  const auto m = hand_model();
  const auto top = export_top(m, 2);
  REQUIRE(top.entries.size() == 2);
  CHECK(top.entries[0] == m.entries[0]);
  CHECK(top.entries[1] == m.entries[1]);
  CHECK_FALSE(top.threshold.has_value());
  CHECK(export_top(m, 100).entries == m.entries);
  CHECK(export_top(m, 0).entries.empty());
}
