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

#include "w2w/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "w2w/error.hpp"

namespace w2w {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return std::string(s);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
  fail(ErrorCode::argument, "config key '" + std::string(key) + "': '" +
                                std::string(value) + "' is not " +
                                std::string(expected));
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  bad_value(key, v, "a boolean");
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    bad_value(key, v, "a number");
  return out;
}

double parse_probability(std::string_view key, std::string_view v) {
  const double x = parse_number<double>(key, v);
  if (!(x > 0.0 && x < 1.0)) bad_value(key, v, "inside (0, 1)");
  return x;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

unsigned resolved_threads(const InduceConfig& config) {
  if (config.threads > 0) return config.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void apply_value(InduceConfig& c, std::string_view key, std::string_view value) {
  if (key == "lowercase") {
    c.tokenizer.lowercase = parse_bool(key, value);
  } else if (key == "split_hyphens") {
    c.tokenizer.split_hyphens = parse_bool(key, value);
  } else if (key == "fw_source") {
    c.fw_source = std::string(value);
  } else if (key == "fw_target") {
    c.fw_target = std::string(value);
  } else if (key == "cutoff") {
    c.cutoff = parse_number<double>(key, value);
    if (!(c.cutoff > 0.0)) bad_value(key, value, "positive");
  } else if (key == "max_iters") {
    c.max_iters = parse_number<std::size_t>(key, value);
    if (c.max_iters == 0) bad_value(key, value, "positive");
  } else if (key == "grid_plus") {
    c.search.grid_plus = parse_number<std::size_t>(key, value);
    if (c.search.grid_plus == 0) bad_value(key, value, "positive");
  } else if (key == "grid_minus") {
    c.search.grid_minus = parse_number<std::size_t>(key, value);
    if (c.search.grid_minus == 0) bad_value(key, value, "positive");
  } else if (key == "minus_floor") {
    c.search.minus_floor = parse_probability(key, value);
  } else if (key == "plus_cap") {
    c.search.plus_cap = parse_probability(key, value);
  } else if (key == "tolerance") {
    c.search.tolerance = parse_number<double>(key, value);
    if (!(c.search.tolerance >= 0.0)) bad_value(key, value, "non-negative");
  } else if (key == "max_refine_steps") {
    c.search.max_refine_steps = parse_number<std::size_t>(key, value);
  } else if (key == "max_segment_tokens") {
    c.max_segment_tokens = parse_number<std::size_t>(key, value);
    if (c.max_segment_tokens == 0) bad_value(key, value, "positive");
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "threads") {
    c.threads = parse_number<unsigned>(key, value);
  } else {
    fail(ErrorCode::argument, "unknown config key '" + std::string(key) + "'");
  }
}

}  // namespace

void set_config_value(InduceConfig& config, std::string_view key,
                      std::string_view value) {
  InduceConfig next = config;
  apply_value(next, key, value);
  config = std::move(next);
}

void load_config_file(InduceConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open config file " + path.string());
  InduceConfig next = config;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::argument, path.string() + ":" + std::to_string(number) +
                                    ": expected key = value");
    apply_value(next, trim(std::string_view(body).substr(0, eq)),
                trim(std::string_view(body).substr(eq + 1)));
  }
  config = std::move(next);
}

std::vector<std::pair<std::string, std::string>> config_entries(
    const InduceConfig& c) {
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  return {
      {"lowercase", b(c.tokenizer.lowercase)},
      {"split_hyphens", b(c.tokenizer.split_hyphens)},
      {"fw_source", c.fw_source},
      {"fw_target", c.fw_target},
      {"cutoff", format_double(c.cutoff)},
      {"max_iters", std::to_string(c.max_iters)},
      {"grid_plus", std::to_string(c.search.grid_plus)},
      {"grid_minus", std::to_string(c.search.grid_minus)},
      {"minus_floor", format_double(c.search.minus_floor)},
      {"plus_cap", format_double(c.search.plus_cap)},
      {"tolerance", format_double(c.search.tolerance)},
      {"max_refine_steps", std::to_string(c.search.max_refine_steps)},
      {"max_segment_tokens", std::to_string(c.max_segment_tokens)},
      {"seed", std::to_string(c.seed)},
      {"threads", std::to_string(c.threads)},
  };
}

std::string describe_config(const InduceConfig& c) {
  std::string out;
  for (const auto& [key, value] : config_entries(c))
    out += key + " = " + value + "\n";
  return out;
}

FunctionWords load_function_words(const InduceConfig& config) {
  FunctionWords fw;
  if (!config.fw_source.empty())
    fw.source = load_function_word_list(config.fw_source, config.tokenizer);
  if (!config.fw_target.empty())
    fw.target = load_function_word_list(config.fw_target, config.tokenizer);
  return fw;
}

Bitext load_configured_bitext(const InduceConfig& config,
                              const std::filesystem::path& source,
                              const std::filesystem::path& target) {
  return load_bitext(source, target, config.tokenizer, load_function_words(config));
}

}  // namespace w2w
