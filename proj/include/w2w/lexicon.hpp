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

#ifndef W2W_LEXICON_HPP
#define W2W_LEXICON_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "w2w/bitext.hpp"
#include "w2w/induction.hpp"

namespace w2w {

struct Lexicon {
  std::vector<LexEntry> entries;  // sorted by lex_order
  // Threshold in likelihood-ratio units; unknown for lexicons read from a
  // TSV without a #threshold= line.
  std::optional<double> threshold;

  bool operator==(const Lexicon&) const = default;
};

// Entries with log_l >= log(threshold). Thresholds below the induction cutoff
// cannot bring back discarded types; they are raised to the cutoff with a
// warning.
Lexicon export_lexicon(const Model& model, double threshold);

// The first `count` entries in lex_order; selects a recall level by lexicon
// size instead of by threshold. The threshold is left unknown.
Lexicon export_top(const Model& model, std::size_t count);

// Fraction of the pooled source and target vocabulary that appears in at
// least one entry.
double recall(const Lexicon& lexicon, const Bitext& bitext);

// Optional "#threshold=<value>" line, a header line, then
// u<TAB>v<TAB>class<TAB>n<TAB>k<TAB>logL.
void write_lexicon_tsv(const Lexicon& lexicon, std::ostream& out);
Lexicon read_lexicon_tsv(std::istream& in);

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);
Lexicon load_lexicon(const std::filesystem::path& path);

}  // namespace w2w

#endif  // W2W_LEXICON_HPP
