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

#ifndef W2W_SCORING_HPP
#define W2W_SCORING_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "w2w/cooc.hpp"
#include "w2w/params.hpp"

namespace w2w {

class LinkStats;

// Dunning's G^2 for the 2x2 contingency table of (u, v) co-occurrence,
// negated when n_uv falls below the independence expectation n_u*n_v/N.
// Throws Error(precondition) naming the offending cell.
double g2_score(std::uint64_t n_uv, std::uint64_t n_u, std::uint64_t n_v,
                std::uint64_t total);

// log B(k | n, p). p == 0 or p == 1 yield 0 or -inf exactly.
double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p);

// log B(k|n,lambda_plus) - log B(k|n,lambda_minus) without the binomial
// coefficient. Returns +inf when lambda_minus == 0 and k > 0.
double log_likelihood_ratio(std::uint64_t k, std::uint64_t n,
                            double lambda_plus, double lambda_minus);

double log_likelihood_ratio(std::uint64_t k, std::uint64_t n,
                            const ClassParams& params);

enum class ScoreKind : std::uint8_t {
  association,       // signed G^2, used to seed the first linking pass
  likelihood_ratio,  // log L(u,v)
};

struct ScoredPair {
  WordId u = 0;
  WordId v = 0;
  double score = 0.0;
};

// Per-class sparse scores. Every stored likelihood-ratio entry satisfies
// score >= log(cutoff).
class ScoreTable {
 public:
  ScoreTable() = default;
  ScoreTable(ScoreKind kind, double cutoff) : kind_(kind), cutoff_(cutoff) {}

  ScoreKind kind() const { return kind_; }
  double cutoff() const { return cutoff_; }

  std::optional<double> find(LinkClass c, WordId u, WordId v) const;
  const PairMap<double>& pairs(LinkClass c) const {
    return scores_[class_index(c)];
  }
  void insert(LinkClass c, WordId u, WordId v, double score);

  std::size_t size() const;
  std::size_t size(LinkClass c) const { return scores_[class_index(c)].size(); }

  // Entries of one class sorted by (u, v).
  std::vector<ScoredPair> sorted(LinkClass c) const;

  bool operator==(const ScoreTable&) const = default;

 private:
  ScoreKind kind_ = ScoreKind::likelihood_ratio;
  double cutoff_ = 1.0;
  std::array<PairMap<double>, kClassCount> scores_;
};

// Seeds the model: keeps every pair with positive signed G^2.
ScoreTable initial_scores(const CoocTable& cooc);

// Scores every co-occurring pair of an estimated class by its likelihood
// ratio and keeps those at or above log(cutoff). Missing link counts are 0.
ScoreTable rebuild_scores(const CoocTable& cooc, const LinkStats& links,
                          const ClassParamSet& params, double cutoff);

// class<TAB>u<TAB>v<TAB>n<TAB>k<TAB>logL
void write_scores_tsv(const ScoreTable& scores, const CoocTable& cooc,
                      const LinkStats& links, const Bitext& bitext,
                      std::ostream& out);

}  // namespace w2w

#endif  // W2W_SCORING_HPP
