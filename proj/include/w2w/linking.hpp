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

#ifndef W2W_LINKING_HPP
#define W2W_LINKING_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "w2w/bitext.hpp"
#include "w2w/cooc.hpp"
#include "w2w/scoring.hpp"

namespace w2w {

struct TokenLink {
  std::size_t segment = 0;
  std::uint32_t source_pos = 0;
  std::uint32_t target_pos = 0;
  WordId u = 0;
  WordId v = 0;
  LinkClass cls = LinkClass::content;
  double score = 0.0;

  bool operator==(const TokenLink&) const = default;
};

class LinkStats {
 public:
  std::uint64_t count(LinkClass c, WordId u, WordId v) const;
  const PairMap<std::uint64_t>& pairs(LinkClass c) const {
    return counts_[class_index(c)];
  }
  std::uint64_t total(LinkClass c) const { return totals_[class_index(c)]; }
  std::uint64_t total() const;

  void add(LinkClass c, WordId u, WordId v, std::uint64_t k = 1);
  void merge(const LinkStats& other);

  bool operator==(const LinkStats& other) const {
    return counts_ == other.counts_ && totals_ == other.totals_;
  }

 private:
  std::array<PairMap<std::uint64_t>, kClassCount> counts_;
  std::array<std::uint64_t, kClassCount> totals_{};
};

// Competitive linking inside one aligned segment pair. Candidates are token
// pairs of equal class whose type pair has a score. They are taken in order
// of decreasing score, then increasing source position, then increasing
// target position; a candidate is linked when both of its tokens are still
// free. The returned links are in emission order.
std::vector<TokenLink> link_segment(const Bitext& bitext,
                                    const SegmentPair& segment,
                                    const ScoreTable& scores);

struct LinkOptions {
  std::size_t max_segment_tokens = 100;
  unsigned threads = 1;
  bool keep_links = false;
};

struct LinkResult {
  LinkStats stats;
  std::vector<TokenLink> links;  // filled only with keep_links
  std::uint64_t unlinked_source = 0;
  std::uint64_t unlinked_target = 0;
  std::size_t skipped_segments = 0;
};

// Links every segment within the length cap. Partitions run concurrently and
// are concatenated by segment index.
LinkResult link_bitext(const Bitext& bitext, const ScoreTable& scores,
                       const LinkOptions& options = {});

// segment<TAB>src_pos<TAB>tgt_pos<TAB>u<TAB>v<TAB>class<TAB>logL
void write_links_tsv(const std::vector<TokenLink>& links, const Bitext& bitext,
                     std::ostream& out);

}  // namespace w2w

#endif  // W2W_LINKING_HPP
