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

#ifndef W2W_INDUCTION_HPP
#define W2W_INDUCTION_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "w2w/bitext.hpp"
#include "w2w/config.hpp"
#include "w2w/cooc.hpp"
#include "w2w/linking.hpp"
#include "w2w/params.hpp"
#include "w2w/scoring.hpp"

namespace w2w {

inline constexpr int kModelFormatVersion = 1;

// A link type of the model, keyed by surfaces so that it outlives the
// bitext it was induced from.
struct LexEntry {
  std::string u;
  std::string v;
  LinkClass cls = LinkClass::content;
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  double log_l = 0.0;

  bool operator==(const LexEntry&) const = default;
};

// Descending log_l, then u, then v.
bool lex_order(const LexEntry& a, const LexEntry& b);

struct IterationRecord {
  std::size_t iteration = 0;  // 1-based
  std::uint64_t links = 0;    // K
  std::uint64_t cooccurrences = 0;  // N
  ClassParamSet params;
  double objective = 0.0;  // log Pr(links | model), summed over classes
  std::size_t score_entries = 0;

  bool operator==(const IterationRecord&) const = default;
};

struct Model {
  ClassParamSet params;
  double cutoff = 1.0;
  std::vector<LexEntry> entries;  // sorted by lex_order
  InduceConfig config;
  std::vector<IterationRecord> history;
  std::size_t best_iteration = 0;  // index into history
  bool non_monotonic = false;

  bool operator==(const Model&) const = default;
};

// Called after each iteration with the link pass that produced it.
using IterationObserver =
    std::function<void(const IterationRecord&, const CoocTable&,
                       const LinkStats&)>;

// Alternates competitive linking and re-estimation until the total link
// log-probability stops increasing or max_iters is reached. When the last
// iteration lowered the objective, the model of the best iteration is
// returned and non_monotonic is set. Throws Error(induction) when no class
// can be estimated.
// With a trace stream, every parameter point evaluated by the search is
// written as "class iter lambda_plus lambda_minus loglik".
Model induce(const Bitext& bitext, const InduceConfig& config,
             const IterationObserver& observer = {},
             std::ostream* trace = nullptr);

// Resolves model entries against a bitext's vocabularies; entries whose
// surfaces are absent from the bitext are skipped.
ScoreTable score_table_for(const Model& model, const Bitext& bitext);

std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);

void save_model(const Model& model, const std::filesystem::path& path);
// Throws Error(io), Error(format) or Error(version).
Model load_model(const std::filesystem::path& path);

}  // namespace w2w

#endif  // W2W_INDUCTION_HPP
