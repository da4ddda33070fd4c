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

#ifndef W2W_EVALKIT_HPP
#define W2W_EVALKIT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "w2w/bitext.hpp"
#include "w2w/cooc.hpp"
#include "w2w/induction.hpp"
#include "w2w/lexicon.hpp"
#include "w2w/linking.hpp"

namespace w2w {

inline constexpr int kBundleFormatVersion = 1;
inline constexpr int kJudgmentFormatVersion = 1;

// Portable draws from mt19937_64; the standard distributions are
// implementation-defined and would make seeded outputs platform-dependent.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
double uniform_unit(std::mt19937_64& rng);

// `sets` independent samples of `size` distinct entry indices each.
// Throws Error(argument) when the lexicon holds fewer than `size` entries.
std::vector<std::vector<std::size_t>> sample_link_types(const Lexicon& lexicon,
                                                        std::size_t sets,
                                                        std::size_t size,
                                                        std::uint64_t seed);

struct Concordance {
  std::size_t segment = 0;
  std::string source;  // space-joined tokens
  std::string target;
  std::vector<std::uint32_t> source_positions;  // tokens of u
  std::vector<std::uint32_t> target_positions;  // tokens of v

  bool operator==(const Concordance&) const = default;
};

// First max_contexts segments, by index, in which u and v co-occur.
std::vector<Concordance> concordances(const Bitext& bitext, std::string_view u,
                                      std::string_view v,
                                      std::size_t max_contexts);

struct BundleItem {
  std::string item_id;
  LexEntry entry;
  std::vector<Concordance> contexts;

  bool operator==(const BundleItem&) const = default;
};

struct AdjudicationBundle {
  std::string bundle_id;
  std::size_t lexicon_size = 0;
  std::optional<double> threshold;
  double recall = 0.0;
  std::uint64_t seed = 0;
  std::size_t set_size = 0;
  std::vector<std::vector<BundleItem>> sets;

  bool operator==(const AdjudicationBundle&) const = default;
};

AdjudicationBundle make_bundle(const Lexicon& lexicon, const Bitext& bitext,
                               std::size_t sets, std::size_t size,
                               std::uint64_t seed, std::size_t max_contexts);

std::string bundle_to_json(const AdjudicationBundle& bundle);
// Throws Error(schema) naming the offending field path.
AdjudicationBundle bundle_from_json(const std::string& text);

enum class Verdict : std::uint8_t { correct, incomplete, incorrect };

std::string_view verdict_name(Verdict v);

struct Judgment {
  std::string item_id;
  std::optional<Verdict> verdict;  // empty marks an unjudged item
  std::string note;

  bool operator==(const Judgment&) const = default;
};

struct JudgmentSet {
  std::string bundle_id;
  std::string judge;
  std::vector<Judgment> judgments;

  bool operator==(const JudgmentSet&) const = default;
};

std::string judgments_to_json(const JudgmentSet& judgments);
JudgmentSet judgments_from_json(const std::string& text);

enum class IncompletePolicy : std::uint8_t { correct, incorrect };

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

// 95% Wilson score interval for successes out of trials.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials);

struct PrecisionEstimate {
  double precision = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  std::uint64_t judged = 0;
  std::uint64_t accepted = 0;
};

// Unjudged items are ignored. Throws Error(argument) when nothing is judged.
PrecisionEstimate precision_ci(const JudgmentSet& judgments,
                               IncompletePolicy policy);

struct ScoreReport {
  std::string bundle_id;
  std::size_t items = 0;
  std::size_t unjudged = 0;  // bundle items with no verdict
  std::size_t unknown = 0;   // judgments naming no bundle item
  PrecisionEstimate lenient;  // incomplete counted correct
  PrecisionEstimate strict;   // incomplete counted incorrect
  std::vector<std::pair<PrecisionEstimate, PrecisionEstimate>> per_set;
};

// Throws Error(schema) when the judgments reference another bundle.
ScoreReport score_judgments(const AdjudicationBundle& bundle,
                            const JudgmentSet& judgments);

std::string format_report(const ScoreReport& report);

// Distribution of the word that replaces a target token under noise.
enum class NoiseSource : std::uint8_t {
  unigram,  // same Zipf law as the text itself
  uniform,  // every vocabulary word equally likely
};

std::string_view noise_source_name(NoiseSource s);
NoiseSource parse_noise_source(std::string_view name);

struct GenerationSpec {
  std::size_t entries = 500;  // lexicon size; vocabulary per side
  std::size_t segments = 1000;
  std::size_t min_length = 5;
  std::size_t max_length = 15;
  double zipf_exponent = 1.0;
  double noise = 0.0;
  NoiseSource noise_source = NoiseSource::uniform;
  double function_fraction = 0.1;
  std::size_t collocations = 0;

  bool operator==(const GenerationSpec&) const = default;
};

struct GroundTruth {
  std::vector<std::pair<std::string, std::string>> pairs;
  // Source collocations (head, follower): the follower is always emitted
  // right after the head.
  std::vector<std::pair<std::string, std::string>> collocations;
  GenerationSpec spec;
  std::uint64_t seed = 0;

  bool operator==(const GroundTruth&) const = default;
};

struct SyntheticCorpus {
  std::vector<std::string> source_lines;
  std::vector<std::string> target_lines;
  FunctionWords function_words;
  GroundTruth truth;
  std::uint64_t replaced_tokens = 0;
  std::uint64_t target_tokens = 0;

  Bitext bitext() const;
};

// Throws Error(argument) on an invalid spec.
SyntheticCorpus generate_synthetic(const GenerationSpec& spec,
                                   std::uint64_t seed);

// Writes <prefix>.src, .tgt, .fw.src, .fw.tgt and .truth.tsv.
void write_synthetic(const SyntheticCorpus& corpus, const std::string& prefix);

void write_truth_tsv(const GroundTruth& truth, std::ostream& out);
GroundTruth read_truth_tsv(std::istream& in);
GroundTruth load_truth(const std::filesystem::path& path);

struct TruthScore {
  double precision = 1.0;
  double recall = 0.0;
  bool empty_lexicon = false;  // precision is a convention, not a measurement
  std::size_t correct = 0;
  std::size_t reachable = 0;  // truth pairs in the recall denominator
};

// Recall counts only truth pairs that co-occur at least once in `bitext`;
// without a bitext every truth pair counts.
TruthScore score_against_truth(const Lexicon& lexicon, const GroundTruth& truth,
                               const Bitext* bitext = nullptr);

struct CurvePoint {
  double threshold = 1.0;
  double recall = 0.0;
  double precision = 1.0;
};

std::vector<CurvePoint> precision_recall_curve(
    const Model& model, const GroundTruth& truth,
    const std::vector<double>& thresholds, const Bitext* bitext = nullptr);

// `count` thresholds spaced geometrically from the model cutoff up to the
// largest likelihood ratio in the model.
std::vector<double> default_thresholds(const Model& model, std::size_t count);

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out);

// Fraction of pair types with n >= min_n whose k/n lies in [low, high].
double bimodality_fraction(const CoocTable& cooc, const LinkStats& links,
                           std::uint64_t min_n, double low, double high);

}  // namespace w2w

#endif  // W2W_EVALKIT_HPP
