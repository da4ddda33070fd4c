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

#ifndef W2W_CONFIG_HPP
#define W2W_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "w2w/bitext.hpp"
#include "w2w/estimation.hpp"

namespace w2w {

struct InduceConfig {
  TokenizerOptions tokenizer;
  std::string fw_source;  // function-word list paths; empty means none
  std::string fw_target;
  double cutoff = 1.0;
  std::size_t max_iters = 20;
  SearchConfig search;
  std::size_t max_segment_tokens = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 selects the number of hardware threads

  bool operator==(const InduceConfig&) const = default;
};

unsigned resolved_threads(const InduceConfig& config);

// Sets one field by key. Throws Error(argument) on unknown keys or values
// that do not parse; the config is then left unchanged.
void set_config_value(InduceConfig& config, std::string_view key,
                      std::string_view value);

// key = value lines; '#' starts a comment. All or nothing.
void load_config_file(InduceConfig& config, const std::filesystem::path& path);

// Every key with its resolved value, in a fixed order. Values parse back
// through set_config_value to the same config.
std::vector<std::pair<std::string, std::string>> config_entries(
    const InduceConfig& config);

// config_entries rendered as key = value lines.
std::string describe_config(const InduceConfig& config);

// Function-word lists named by the config, folded by its tokenizer options.
FunctionWords load_function_words(const InduceConfig& config);

// Loads a bitext with the config's tokenizer and function-word lists.
Bitext load_configured_bitext(const InduceConfig& config,
                              const std::filesystem::path& source,
                              const std::filesystem::path& target);

}  // namespace w2w

#endif  // W2W_CONFIG_HPP
