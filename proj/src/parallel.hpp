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

#ifndef W2W_SRC_PARALLEL_HPP
#define W2W_SRC_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace w2w::detail {

struct Chunk {
  std::size_t begin;
  std::size_t end;
};

// Contiguous split of [0, n) into at most `parts` non-empty ranges.
inline std::vector<Chunk> split_range(std::size_t n, unsigned parts) {
  parts = std::max(1u, parts);
  const std::size_t count = std::min<std::size_t>(parts, std::max<std::size_t>(n, 1));
  std::vector<Chunk> chunks;
  for (std::size_t i = 0; i < count; ++i)
    chunks.push_back({n * i / count, n * (i + 1) / count});
  return chunks;
}

// Runs fn(chunk_index, chunk) for every chunk, one thread per chunk after the
// first, which runs on the calling thread.
template <class Fn>
void for_each_chunk(const std::vector<Chunk>& chunks, Fn&& fn) {
  if (chunks.size() <= 1) {
    for (std::size_t i = 0; i < chunks.size(); ++i) fn(i, chunks[i]);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(chunks.size() - 1);
  for (std::size_t i = 1; i < chunks.size(); ++i)
    workers.emplace_back([&fn, &chunks, i] { fn(i, chunks[i]); });
  fn(0, chunks[0]);
}

}  // namespace w2w::detail

#endif  // W2W_SRC_PARALLEL_HPP
