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

#include "w2w/linking.hpp"

#include <algorithm>
#include <ostream>

#include "parallel.hpp"

namespace w2w {

std::uint64_t LinkStats::count(LinkClass c, WordId u, WordId v) const {
  const auto& m = counts_[class_index(c)];
  auto it = m.find(pair_key(u, v));
  return it == m.end() ? 0 : it->second;
}

std::uint64_t LinkStats::total() const {
  std::uint64_t sum = 0;
  for (auto t : totals_) sum += t;
  return sum;
}

void LinkStats::add(LinkClass c, WordId u, WordId v, std::uint64_t k) {
  counts_[class_index(c)][pair_key(u, v)] += k;
  totals_[class_index(c)] += k;
}

void LinkStats::merge(const LinkStats& other) {
  for (std::size_t c = 0; c < kClassCount; ++c) {
    for (const auto& [key, k] : other.counts_[c]) counts_[c][key] += k;
    totals_[c] += other.totals_[c];
  }
}

namespace {

struct Candidate {
  double score;
  std::uint32_t i;
  std::uint32_t j;
};

}  // namespace

std::vector<TokenLink> link_segment(const Bitext& bitext,
                                    const SegmentPair& segment,
                                    const ScoreTable& scores) {
  const auto& sv = bitext.source_vocab();
  const auto& tv = bitext.target_vocab();
  const auto l = static_cast<std::uint32_t>(segment.source.size());
  const auto m = static_cast<std::uint32_t>(segment.target.size());

  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(l) * m);
  for (std::uint32_t i = 0; i < l; ++i) {
    const WordId u = segment.source[i];
    const LinkClass cls = sv.link_class(u);
    const auto& table = scores.pairs(cls);
    if (table.empty()) continue;
    for (std::uint32_t j = 0; j < m; ++j) {
      const WordId v = segment.target[j];
      if (tv.link_class(v) != cls) continue;
      if (auto it = table.find(pair_key(u, v)); it != table.end())
        candidates.push_back({it->second, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.i != b.i) return a.i < b.i;
              return a.j < b.j;
            });

  std::vector<bool> source_used(l, false), target_used(m, false);
  std::vector<TokenLink> links;
  const std::uint32_t limit = std::min(l, m);
  for (const auto& cand : candidates) {
    if (source_used[cand.i] || target_used[cand.j]) continue;
    source_used[cand.i] = target_used[cand.j] = true;
    const WordId u = segment.source[cand.i];
    links.push_back({segment.index, cand.i, cand.j, u, segment.target[cand.j],
                     sv.link_class(u), cand.score});
    if (links.size() == limit) break;
  }
  return links;
}

LinkResult link_bitext(const Bitext& bitext, const ScoreTable& scores,
                       const LinkOptions& options) {
  struct Partial {
    LinkStats stats;
    std::vector<TokenLink> links;
    std::uint64_t unlinked_source = 0;
    std::uint64_t unlinked_target = 0;
    std::size_t skipped = 0;
  };
  const auto& segments = bitext.segments();
  const auto chunks = detail::split_range(segments.size(), options.threads);
  std::vector<Partial> partial(chunks.size());
  detail::for_each_chunk(chunks, [&](std::size_t p, detail::Chunk chunk) {
    auto& out = partial[p];
    for (std::size_t s = chunk.begin; s < chunk.end; ++s) {
      const auto& seg = segments[s];
      if (!within_length_cap(seg, options.max_segment_tokens)) {
        ++out.skipped;
        continue;
      }
      auto links = link_segment(bitext, seg, scores);
      for (const auto& link : links) out.stats.add(link.cls, link.u, link.v);
      out.unlinked_source += seg.source.size() - links.size();
      out.unlinked_target += seg.target.size() - links.size();
      if (options.keep_links)
        out.links.insert(out.links.end(), links.begin(), links.end());
    }
  });

  LinkResult result;
  for (auto& p : partial) {
    result.stats.merge(p.stats);
    result.links.insert(result.links.end(), p.links.begin(), p.links.end());
    result.unlinked_source += p.unlinked_source;
    result.unlinked_target += p.unlinked_target;
    result.skipped_segments += p.skipped;
  }
  return result;
}

void write_links_tsv(const std::vector<TokenLink>& links, const Bitext& bitext,
                     std::ostream& out) {
  const auto precision = out.precision(17);
  for (const auto& link : links)
    out << link.segment << '\t' << link.source_pos << '\t' << link.target_pos
        << '\t' << bitext.source_vocab().surface(link.u) << '\t'
        << bitext.target_vocab().surface(link.v) << '\t'
        << class_name(link.cls) << '\t' << link.score << '\n';
  out.precision(precision);
}

}  // namespace w2w
