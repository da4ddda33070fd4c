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

#include "support.hpp"
#include "w2w/config.hpp"
#include "w2w/error.hpp"

using namespace w2w;

TEST_CASE("defaults") {
  const InduceConfig c;
  CHECK(c.cutoff == 1.0);
  CHECK(c.max_iters == 20);
  CHECK(c.max_segment_tokens == 100);
  CHECK(c.tokenizer.lowercase);
  CHECK(c.tokenizer.split_hyphens);
  CHECK(c.search.grid_plus == 25);
  CHECK(c.search.grid_minus == 25);
  CHECK(c.search.minus_floor == 1e-8);
  CHECK(c.search.max_refine_steps == 200);
  CHECK(resolved_threads(c) >= 1);
}

TEST_CASE("every entry parses back to the same config") {
  InduceConfig c;
  c.cutoff = 2.5;
  c.max_iters = 7;
  c.tokenizer.split_hyphens = false;
  c.search.minus_floor = 3e-9;
  c.search.plus_cap = 0.9999;
  c.fw_source = "fw.en";
  c.seed = 42;
  c.threads = 3;
  InduceConfig d;
  for (const auto& [k, v] : config_entries(c)) set_config_value(d, k, v);
  CHECK(d == c);
  CHECK(describe_config(c).find("cutoff = 2.5") != std::string::npos);
}

TEST_CASE("bad keys and values are argument errors") {
  InduceConfig c;
  for (auto [k, v] : {std::pair{"nope", "1"}, {"cutoff", "abc"}, {"cutoff", "0"},
                      {"cutoff", "-1"}, {"max_iters", "0"}, {"lowercase", "maybe"},
                      {"grid_plus", "1x"}, {"plus_cap", "1.5"}}) {
    try {
      set_config_value(c, k, v);
      FAIL("accepted " << k << "=" << v);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::argument);
    }
  }
  CHECK(c == InduceConfig{});
}

TEST_CASE("config file with comments; later lines win") {
  support::TempDir dir;
  support::write_file(dir.file("run.cfg"),
                      "# induction run\ncutoff = 2\n\nmax_iters=9  # short\ncutoff = 3\n");
  InduceConfig c;
  load_config_file(c, dir.file("run.cfg"));
  CHECK(c.cutoff == 3.0);
  CHECK(c.max_iters == 9);
  support::write_file(dir.file("bad.cfg"), "cutoff = 5\ncutoff 2\n");
  CHECK_THROWS_AS(load_config_file(c, dir.file("bad.cfg")), Error);
  CHECK(c.cutoff == 3.0);
  CHECK_THROWS_AS(load_config_file(c, dir.file("missing.cfg")), Error);
}

TEST_CASE("configured bitext uses the function-word lists") {
  support::TempDir dir;
  support::write_file(dir.file("a"), "The dog\n");
  support::write_file(dir.file("b"), "Le chien\n");
  support::write_file(dir.file("fa"), "THE\n");
  support::write_file(dir.file("fb"), "le\n");
  InduceConfig c;
  c.fw_source = dir.file("fa");
  c.fw_target = dir.file("fb");
  const auto b = load_configured_bitext(c, dir.file("a"), dir.file("b"));
  CHECK(b.source_vocab().link_class(*b.source_vocab().find("the")) == LinkClass::function);
  CHECK(b.target_vocab().link_class(*b.target_vocab().find("le")) == LinkClass::function);
  CHECK(b.target_vocab().link_class(*b.target_vocab().find("chien")) == LinkClass::content);
}
