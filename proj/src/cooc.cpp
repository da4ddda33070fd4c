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

#include "w2w/cooc.hpp"

#include <algorithm>
#include <ostream>

#include "parallel.hpp"
#include "w2w/log.hpp"

namespace w2w {

bool within_length_cap(const SegmentPair& segment, std::size_t cap) {
  return segment.source.size() <= cap && segment.target.size() <= cap;
}

std::uint64_t CoocTable::count(LinkClass c, WordId u, WordId v) const {
  const auto& m = pairs_[class_index(c)];
  auto it = m.find(pair_key(u, v));
  return it == m.end() ? 0 : it->second;
}

std::uint64_t CoocTable::total() const {
  std::uint64_t sum = 0;
  for (auto t : totals_) sum += t;
  return sum;
}

std::vector<PairCount> CoocTable::sorted(LinkClass c) const {
  std::vector<PairCount> out;
  out.reserve(pairs_[class_index(c)].size());
  for (const auto& [key, n] : pairs_[class_index(c)])
    out.push_back({key_source(key), key_target(key), n});
  std::sort(out.begin(), out.end(), [](const PairCount& a, const PairCount& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return out;
}

namespace {

using ClassPairs = std::array<PairMap<std::uint64_t>, kClassCount>;

void count_segment(const Bitext& bitext, const SegmentPair& seg,
                   ClassPairs& out) {
  const auto& sv = bitext.source_vocab();
  const auto& tv = bitext.target_vocab();
  for (WordId u : seg.source) {
    const LinkClass cu = sv.link_class(u);
    auto& m = out[class_index(cu)];
    for (WordId v : seg.target)
      if (tv.link_class(v) == cu) ++m[pair_key(u, v)];
  }
}

}  // namespace

CoocTable build_cooc(const Bitext& bitext, const CountOptions& options) {
  CoocTable table;
  const auto& segments = bitext.segments();
  for (const auto& seg : segments)
    if (!within_length_cap(seg, options.max_segment_tokens))
      table.skipped_.push_back(seg.index);
  if (!table.skipped_.empty())
    log_warning("skipped " + std::to_string(table.skipped_.size()) +
                " segment pair(s) longer than " +
                std::to_string(options.max_segment_tokens) + " tokens");

  const auto chunks = detail::split_range(segments.size(), options.threads);
  std::vector<ClassPairs> partial(chunks.size());
  detail::for_each_chunk(chunks, [&](std::size_t i, detail::Chunk chunk) {
    for (std::size_t s = chunk.begin; s < chunk.end; ++s)
      if (within_length_cap(segments[s], options.max_segment_tokens))
        count_segment(bitext, segments[s], partial[i]);
  });

  table.pairs_ = std::move(partial[0]);
  for (std::size_t i = 1; i < partial.size(); ++i)
    for (std::size_t c = 0; c < kClassCount; ++c)
      for (const auto& [key, n] : partial[i][c]) table.pairs_[c][key] += n;

  table.source_marginal_.assign(bitext.source_vocab().size(), 0);
  table.target_marginal_.assign(bitext.target_vocab().size(), 0);
  for (std::size_t c = 0; c < kClassCount; ++c) {
    for (const auto& [key, n] : table.pairs_[c]) {
      table.source_marginal_[key_source(key)] += n;
      table.target_marginal_[key_target(key)] += n;
      table.totals_[c] += n;
    }
  }
  return table;
}

void write_cooc_tsv(const CoocTable& table, const Bitext& bitext,
                    std::ostream& out) {
  for (std::size_t c = 0; c < kClassCount; ++c) {
    const auto cls = class_at(c);
    for (const auto& p : table.sorted(cls))
      out << class_name(cls) << '\t' << bitext.source_vocab().surface(p.u)
          << '\t' << bitext.target_vocab().surface(p.v) << '\t' << p.n << '\n';
  }
}

}  // namespace w2w
