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

#ifndef W2W_COOC_HPP
#define W2W_COOC_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "w2w/bitext.hpp"

namespace w2w {

using PairKey = std::uint64_t;

inline constexpr PairKey pair_key(WordId u, WordId v) {
  return (static_cast<PairKey>(u) << 32) | v;
}
inline constexpr WordId key_source(PairKey key) {
  return static_cast<WordId>(key >> 32);
}
inline constexpr WordId key_target(PairKey key) {
  return static_cast<WordId>(key & 0xffffffffu);
}

template <class T>
using PairMap = std::unordered_map<PairKey, T>;

// Only cross-class pairs are excluded; no other policy ships.
enum class ClassPolicy { strict };

struct CountOptions {
  std::size_t max_segment_tokens = 100;
  unsigned threads = 1;
  ClassPolicy policy = ClassPolicy::strict;
};

bool within_length_cap(const SegmentPair& segment, std::size_t cap);

struct PairCount {
  WordId u = 0;
  WordId v = 0;
  std::uint64_t n = 0;
};

// Per-class co-occurrence counts over aligned segments. A segment holding a
// tokens of u and b tokens of v contributes a*b to n(u,v).
class CoocTable {
 public:
  std::uint64_t count(LinkClass c, WordId u, WordId v) const;
  const PairMap<std::uint64_t>& pairs(LinkClass c) const {
    return pairs_[class_index(c)];
  }

  // Marginals are per type; each type belongs to exactly one class.
  std::uint64_t source_marginal(WordId u) const {
    return u < source_marginal_.size() ? source_marginal_[u] : 0;
  }
  std::uint64_t target_marginal(WordId v) const {
    return v < target_marginal_.size() ? target_marginal_[v] : 0;
  }

  std::uint64_t total(LinkClass c) const { return totals_[class_index(c)]; }
  std::uint64_t total() const;

  // Segment indices skipped by the length cap.
  std::span<const std::size_t> skipped_segments() const { return skipped_; }

  // Entries of one class sorted by (u, v).
  std::vector<PairCount> sorted(LinkClass c) const;

  bool operator==(const CoocTable& other) const {
    return pairs_ == other.pairs_ &&
           source_marginal_ == other.source_marginal_ &&
           target_marginal_ == other.target_marginal_ &&
           totals_ == other.totals_;
  }

 private:
  friend CoocTable build_cooc(const Bitext&, const CountOptions&);

  std::array<PairMap<std::uint64_t>, kClassCount> pairs_;
  std::vector<std::uint64_t> source_marginal_;
  std::vector<std::uint64_t> target_marginal_;
  std::array<std::uint64_t, kClassCount> totals_{};
  std::vector<std::size_t> skipped_;
};

// Counting is partitioned over options.threads segment batches and merged by
// summation, so the result does not depend on the thread count.
CoocTable build_cooc(const Bitext& bitext, const CountOptions& options = {});

// class<TAB>u<TAB>v<TAB>n, sorted by class then ids.
void write_cooc_tsv(const CoocTable& table, const Bitext& bitext,
                    std::ostream& out);

}  // namespace w2w

#endif  // W2W_COOC_HPP
